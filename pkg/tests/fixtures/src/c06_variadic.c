#include <stdarg.h>

int gather(int n, ...) {
    va_list ap;
    va_start(ap, n);
    int s = 0;
    for (int i = 0; i < n; i++)
        s += va_arg(ap, int);
    va_end(ap);
    return s;
}

int driver(int seed) {
    return gather(3, seed, seed * 2, seed * 3);
}
