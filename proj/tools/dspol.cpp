#include <iostream>
#include <string>
#include <vector>

#include <dspol/cli.hpp>

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return dspol::cli::run_command_line(std::move(args), std::cout, std::cerr);
}
