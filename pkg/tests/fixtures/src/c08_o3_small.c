int nudge(int x) {
    int a = x ^ 0x77;
    for (int i = 0; i < (x & 3); i++)
        a += (a >> 1) ^ i;
    a = a * 3 + 1; a ^= a >> 2; a += x * 5;
    return a;
}

int driver(int seed) {
    return nudge(seed) + nudge(seed + 1);
}
