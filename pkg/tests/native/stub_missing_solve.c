/* Stub library with every entry point except ipasir_solve. */

const char *ipasir_signature(void) { return "stub-missing-solve"; }
void *ipasir_init(void) { return (void *)1; }
void ipasir_release(void *s) { (void)s; }
void ipasir_add(void *s, int lit) { (void)s; (void)lit; }
void ipasir_assume(void *s, int lit) { (void)s; (void)lit; }
int ipasir_val(void *s, int lit) { (void)s; (void)lit; return 0; }
int ipasir_failed(void *s, int lit) { (void)s; (void)lit; return 0; }
void ipasir_set_terminate(void *s, void *d, int (*cb)(void *)) {
    (void)s;
    (void)d;
    (void)cb;
}
