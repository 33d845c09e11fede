#include "npsvor/cli.hpp"

int main(int argc, char** argv) { return npsvor::run(argc, argv); }
