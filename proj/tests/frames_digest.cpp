// Prints the digest of the pinned determinism run.
#include <iostream>

#include "determinism_probe.hpp"

int main() {
    const std::string csv = probe::frames_csv();
    std::cout << probe::hex(probe::digest(csv)) << " " << csv.size() << "\n";
}
