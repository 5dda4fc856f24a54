// Placeholder CLI entry point; replaced by the full experiment runner.
#include <cstdio>

int main() {
  std::puts("fluxkit: experiment runner not yet wired up");
  return 1;
}
