int classify_range(const unsigned char *in, const unsigned char *inend,
                   unsigned char *out, unsigned char *outend) {
    int val = 0;
    while (in < inend) {
        if (*in == 0) {
            break;
        }
        else if ((*in >= 0x20) && (*in < 0x80) ||
                (*in == '\n') || (*in == '\t')) {
            // some code
        } else if (*in >= 0x80) {
            if (outend - out < 11) break;
            if (*in < 0xc0) {
                // some code
            } else if (*in < 0xe0) {
                if (inend - in < 2) break;
                val = (in[0] & 0xf);
                // some code
            }
        }
        ++in;
    }
    return val;
}
