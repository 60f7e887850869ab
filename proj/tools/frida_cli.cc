#include <iostream>

#include "frida/report/cli.h"

int main(int argc, char** argv) {
  return frida::report::cli_main(argc, argv, std::cout, std::cerr);
}
