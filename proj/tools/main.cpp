#include "cli.hpp"

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
    const char* env = std::getenv("HDX_CAPS");
    return hdx::cli::run({argv + 1, argv + argc}, std::cout, std::cerr, env ? env : "");
}
