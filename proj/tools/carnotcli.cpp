#include <cstdio>

int main() {
    std::puts("carnotcli: not wired up yet");
    return 2;
}
