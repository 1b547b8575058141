#include <cstdio>

int main() {
  std::puts("taxis: CLI pending");
  return 0;
}
