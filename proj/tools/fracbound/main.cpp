#include "commands.hpp"

int main(int argc, char** argv) { return fracbound::app::run(argc, argv); }
