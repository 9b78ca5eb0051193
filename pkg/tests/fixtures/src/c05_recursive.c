int spiral(int x) {
    if (x <= 1)
        return 1;
    return x + spiral(x - 1);
}

int driver(int seed) {
    return spiral(seed & 15);
}
