#include <cstdio>

int main() {
  std::puts("onelap: CLI under construction");
  return 0;
}
