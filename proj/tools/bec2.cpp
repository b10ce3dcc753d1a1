#include "bec2/cli/commands.hpp"

int main(int argc, char** argv)
{
    return bec2::cli::run(argc, argv);
}
