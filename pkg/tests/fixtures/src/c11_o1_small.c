int bump(int x) {
    int a = x + 3;
    for (int i = 0; i < (x & 1); i++)
        a ^= x >> i;
    a = a * 7 + 1; a ^= a >> 3; a += x & 31;
    return a;
}

int driver(int seed) {
    return bump(seed) + bump(seed + 2);
}
