static int helper(int x) {
    int a = x;
    for (int i = 0; i < (x & 7); i++)
        a += (a >> 1) ^ (i * 3);
    return a;
}

int driver(int seed) {
    return helper(seed) * 2 + 1;
}
