__attribute__((noinline)) int worker(int x) {
    int a = x;
    for (int i = 0; i < 4; i++)
        a += i * x;
    return a;
}

int driver(int seed) {
    return worker(seed) + 1;
}
