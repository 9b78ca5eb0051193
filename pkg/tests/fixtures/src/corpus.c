/* Graded-size function corpus for inlining-ratio measurements.
 * The size bands are straight-line arithmetic chains so each band's inline
 * cost stays stable across optimization levels (loops would be unrolled
 * differently per level and blur the bands). */

static int tiny_a(int x) {
    int a = x + 1;
    a ^= a >> 3;
    return a * 2 + (x & 5);
}

static int tiny_b(int x) {
    int a = x * 2 - 1;
    a += a >> 2;
    return a ^ (x | 9);
}

static int small_a(int x) {
    int a = x;
    a += (a >> 1) ^ 11; a = a * 3 + 7; a ^= a << 2; a -= x & 31;
    a += (a >> 4) | 3;  a = a * 5 + 1; a ^= a >> 3; a += x * 3;
    return a;
}

static int small_b(int x) {
    int a = x ^ 0x1234;
    a = a * 7 + 5; a ^= a >> 2; a += x & 63; a -= a >> 5;
    a = a * 9 + 3; a ^= a << 1; a += x * 5;  a |= 17;
    return a;
}

static int medium_a(int x) {
    int a = x;
    a = a * 3 + 1;  a ^= a >> 2; a += x * 5;  a |= 12; a -= x / 3;
    a = a * 5 + 2;  a ^= a >> 3; a += x * 7;  a &= ~1; a += x % 9;
    a = a * 7 + 3;  a ^= a >> 4; a += x * 11; a |= 5;  a -= x / 7;
    a = a * 11 + 4; a ^= a >> 5; a += x * 13; a &= ~2; a += x % 11;
    a = a * 13 + 5; a ^= a >> 6; a += x * 17; a |= 9;  a -= x / 9;
    return a;
}

static int medium_b(int x) {
    int a = x + 99;
    a = a * 17 + 1; a ^= a >> 3; a += x * 19; a |= 33; a -= x / 2;
    a = a * 19 + 2; a ^= a >> 4; a += x * 23; a &= ~4; a += x % 7;
    a = a * 23 + 3; a ^= a >> 5; a += x * 29; a |= 65; a -= x / 5;
    a = a * 29 + 4; a ^= a >> 6; a += x * 31; a &= ~8; a += x % 13;
    a = a * 31 + 5; a ^= a >> 7; a += x * 37; a |= 129; a -= x / 8;
    return a;
}

#define ROUND(k) \
    a = a * (k) + 1; a ^= a >> 2; a += x * (k); a |= (k); a -= x / ((k) + 2); \
    a = a * (k) + 3; a ^= a >> 4; a -= x * ((k) - 1); a &= ~(k); a += x % ((k) + 5);

int large_a(int x) {
    int a = x;
    ROUND(3) ROUND(5) ROUND(7) ROUND(9) ROUND(11) ROUND(13) ROUND(15) ROUND(17)
    ROUND(19) ROUND(21) ROUND(23) ROUND(25)
    return a;
}

int large_b(int x) {
    int a = x + 7;
    ROUND(4) ROUND(6) ROUND(8) ROUND(10) ROUND(12) ROUND(14) ROUND(16) ROUND(18)
    ROUND(20) ROUND(22) ROUND(24) ROUND(26)
    return a;
}

int huge_a(int x) {
    int a = x;
    ROUND(3) ROUND(4) ROUND(5) ROUND(6) ROUND(7) ROUND(8) ROUND(9) ROUND(10)
    ROUND(11) ROUND(12) ROUND(13) ROUND(14) ROUND(15) ROUND(16) ROUND(17)
    ROUND(18) ROUND(19) ROUND(20) ROUND(21) ROUND(22) ROUND(23) ROUND(24)
    ROUND(25) ROUND(26) ROUND(27) ROUND(28) ROUND(29) ROUND(30) ROUND(31)
    ROUND(32) ROUND(33) ROUND(34) ROUND(35) ROUND(36) ROUND(37) ROUND(38)
    ROUND(39) ROUND(40) ROUND(41) ROUND(42) ROUND(43) ROUND(44) ROUND(45)
    ROUND(46) ROUND(47) ROUND(48)
    return a;
}

__attribute__((noinline)) int pinned(int x) {
    int acc = 0;
    for (int i = 0; i < (x & 7); i++) acc += i * x;
    return acc;
}

__attribute__((always_inline)) int forced(int x) {
    int acc = x;
    for (int i = 0; i < 3; i++) acc += (acc >> 1) ^ i;
    return acc;
}

int chain(int x) { return x <= 1 ? 1 : x + chain(x - 1); }

#include <stdarg.h>
int varsum(int n, ...) {
    va_list ap; va_start(ap, n);
    int s = 0;
    for (int i = 0; i < n; i++) s += va_arg(ap, int);
    va_end(ap);
    return s;
}

int harness(int seed) {
    int v = seed;
    v += tiny_a(v); v += tiny_a(v + 3); v += tiny_b(v); v += tiny_b(v - 4);
    v += small_a(v); v += small_a(v + 1); v += small_b(v); v += small_b(v - 2);
    v += medium_a(v); v += medium_a(v + 5); v += medium_b(v); v += medium_b(v - 7);
    v += large_a(v); v += large_a(v + 9); v += large_b(v); v += large_b(v - 11);
    v += huge_a(v); v += huge_a(v + 13);
    v += pinned(v); v += forced(v); v += forced(v + 1);
    v += chain(v & 7); v += varsum(3, v, seed, 42);
    return v;
}
