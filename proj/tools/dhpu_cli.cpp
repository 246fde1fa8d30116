#include "dhpu/driver.hpp"

int main(int argc, char** argv) { return dhpu::run_cli(argc, argv); }
