#define ROUND(k) \
    a = a * (k) + 1; a ^= a >> 2; a += x * (k); a |= (k); a -= x / ((k) + 2); \
    a = a * (k) + 3; a ^= a >> 4; a -= x * ((k) - 1); a &= ~(k); a += x % ((k) + 5);

int big(int x) {
    int a = x;
    for (int i = 0; i < (x & 3); i++)
        a ^= (a >> i) + x;
    ROUND(3) ROUND(5) ROUND(7) ROUND(9) ROUND(11) ROUND(13) ROUND(15) ROUND(17)
    ROUND(19) ROUND(21) ROUND(23) ROUND(25)
    return a;
}

int driver(int seed) {
    return big(seed) + seed;
}
