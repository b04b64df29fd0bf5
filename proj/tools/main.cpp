#include "trajkit/cli.hpp"

int main(int argc, char** argv) { return trajkit::run(argc, argv); }
