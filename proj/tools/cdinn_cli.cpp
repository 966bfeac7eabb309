#include <cstdio>

int main() {
  std::puts("cdinn: command-line surface lands here");
  return 0;
}
