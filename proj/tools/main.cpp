#include "cli.hpp"

extern "C" void openblas_set_num_threads(int);

int main(int argc, char** argv) {
  // Single-threaded BLAS keeps floating-point reductions in a fixed order,
  // which the byte-identical rerun guarantee depends on.
  openblas_set_num_threads(1);
  return dipstop::cli::run(argc, argv);
}
