#include "ngdr/commands.h"

int main(int argc, char** argv) { return ngdr::RunCli(argc, argv); }
