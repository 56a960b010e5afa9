#include "shapelab/cli.hpp"

int main(int argc, char** argv) { return shapelab::run(argc, argv); }
