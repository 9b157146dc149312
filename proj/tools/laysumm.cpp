#include "laysumm/app.hpp"

int main(int argc, char** argv) { return laysumm::app::run(argc, argv); }
