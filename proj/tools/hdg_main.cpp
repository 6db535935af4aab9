#include <cstdio>

int main() {
    std::fprintf(stderr, "hdg: command-line interface not wired up yet\n");
    return 2;
}
