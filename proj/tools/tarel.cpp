#include <cstdio>

int main() {
  std::puts("tarel: subcommands not wired up yet");
  return 2;
}
