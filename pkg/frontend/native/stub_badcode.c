/* Conforming symbol set, nonconforming behavior: solve answers 7. */

const char *ipasir_signature(void) { return "stub-badcode"; }
void *ipasir_init(void) { static int token; return &token; }
void ipasir_release(void *s) { (void)s; }
void ipasir_add(void *s, int lit) { (void)s; (void)lit; }
void ipasir_assume(void *s, int lit) { (void)s; (void)lit; }
int ipasir_solve(void *s) { (void)s; return 7; }
int ipasir_val(void *s, int lit) { (void)s; (void)lit; return 0; }
int ipasir_failed(void *s, int lit) { (void)s; (void)lit; return 0; }
void ipasir_set_terminate(void *s, void *d, int (*cb)(void *)) {
    (void)s;
    (void)d;
    (void)cb;
}
