int plain(int x) {
    int a = x;
    for (int i = 1; i < 5; i++)
        a *= i + x;
    return a;
}

__attribute__((optnone)) int curator(int seed) {
    return plain(seed) + 1;
}
