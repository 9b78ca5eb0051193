static int tiny(int x) {
    int a = x + 1;
    a ^= a >> 3;
    return a * 2 + (x & 5);
}

static int small(int x) {
    int a = x;
    a += (a >> 1) ^ 11; a = a * 3 + 7; a ^= a << 2; a -= x & 31;
    a += (a >> 4) | 3;  a = a * 5 + 1; a ^= a >> 3; a += x * 3;
    return a;
}

#define ROUND(k) \
    a = a * (k) + 1; a ^= a >> 2; a += x * (k); a |= (k); a -= x / ((k) + 2); \
    a = a * (k) + 3; a ^= a >> 4; a -= x * ((k) - 1); a &= ~(k); a += x % ((k) + 5);

int medium(int x) {
    int a = x;
    ROUND(3) ROUND(5) ROUND(7)
    return a;
}

int large(int x) {
    int a = x;
    ROUND(3) ROUND(5) ROUND(7) ROUND(9) ROUND(11) ROUND(13) ROUND(15) ROUND(17)
    ROUND(19) ROUND(21) ROUND(23) ROUND(25)
    return a;
}

int harness(int seed) {
    int v = seed;
    v += tiny(v); v += tiny(v + 3);
    v += small(v); v += small(v + 1);
    v += medium(v); v += medium(v + 5);
    v += large(v); v += large(v + 9);
    return v;
}
