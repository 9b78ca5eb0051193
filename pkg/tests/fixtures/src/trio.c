static int helper(int x) {
    int acc = x;
    for (int i = 0; i < 8; i++)
        acc += (acc >> 1) ^ (i * 3);
    return acc;
}

__attribute__((always_inline)) int util(int x) {
    int acc = 0;
    for (int i = 1; i <= x % 7; i++)
        acc += i * i - x;
    return acc + 5;
}

__attribute__((noinline)) int worker(int seed) {
    int v = helper(seed);
    v += util(v);
    return v * 2 + 1;
}
