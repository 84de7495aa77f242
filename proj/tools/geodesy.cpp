#include <cstdio>
int main() { std::puts("geodesy cli stub"); return 0; }
