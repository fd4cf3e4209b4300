/* Run a TestU01 battery on 32-bit little-endian words read from stdin.
 *
 *   cc -O2 demos/testu01_stdin.c -o testu01_stdin -ltestu01 -lprobdist -lmylib -lm
 *   python -m mxg gen --param mxg32-521 --path int32 --count 4000000000 --format raw \
 *       | ./testu01_stdin big
 *
 * Arguments: small | crush | big (default small).
 */
#include <stdint.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "TestU01.h"

#define BUF 65536

static uint32_t buf[BUF];
static size_t pos = BUF, len = BUF;

static unsigned int next32(void)
{
    if (pos == len) {
        len = fread(buf, sizeof buf[0], BUF, stdin);
        if (len == 0) {
            fprintf(stderr, "testu01_stdin: input exhausted\n");
            exit(3);
        }
        pos = 0;
    }
    uint32_t w = buf[pos++];
    const unsigned char *b = (const unsigned char *)&w;
    return (uint32_t)b[0] | (uint32_t)b[1] << 8 | (uint32_t)b[2] << 16 | (uint32_t)b[3] << 24;
}

int main(int argc, char **argv)
{
    const char *which = argc > 1 ? argv[1] : "small";
    unif01_Gen *gen = unif01_CreateExternGenBits("mxg-stdin", next32);
    if (strcmp(which, "big") == 0)
        bbattery_BigCrush(gen);
    else if (strcmp(which, "crush") == 0)
        bbattery_Crush(gen);
    else
        bbattery_SmallCrush(gen);
    unif01_DeleteExternGenBits(gen);
    return 0;
}
