__attribute__((always_inline)) int fast(int x) {
    int a = x;
    for (int i = 0; i < 3; i++)
        a += (a >> 1) ^ i;
    return a;
}

int driver(int seed) {
    return fast(seed) + 5;
}
