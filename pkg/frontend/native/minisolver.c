/* Minimal conforming incremental SAT solver for exercising the loader.
 *
 * DPLL with unit propagation, assumptions forced up front, cooperative
 * interruption through the registered terminate callback.  Slow on purpose:
 * it exists to be correct and small, not fast.
 */

#include <stdlib.h>
#include <string.h>

typedef struct {
    int *lits;
    int size;
} clause_t;

typedef struct {
    clause_t *clauses;
    int n_clauses, cap_clauses;
    int *buf;
    int buf_size, buf_cap;
    int *assumptions;
    int n_assumptions, cap_assumptions;
    int *failed;
    int n_failed;
    signed char *value; /* 1-indexed; 0 unassigned, 1 true, -1 false */
    int value_cap;
    int max_var;
    int (*terminate)(void *);
    void *terminate_data;
    int interrupted;
    long ticks;
} solver_t;

const char *ipasir_signature(void) { return "minisolver-1.0"; }

void *ipasir_init(void) { return calloc(1, sizeof(solver_t)); }

void ipasir_release(void *ptr) {
    solver_t *s = ptr;
    for (int i = 0; i < s->n_clauses; i++) free(s->clauses[i].lits);
    free(s->clauses);
    free(s->buf);
    free(s->assumptions);
    free(s->failed);
    free(s->value);
    free(s);
}

static void ensure_var(solver_t *s, int var) {
    if (var >= s->value_cap) {
        int cap = var * 2 + 8;
        s->value = realloc(s->value, cap);
        memset(s->value + s->value_cap, 0, cap - s->value_cap);
        s->value_cap = cap;
    }
    if (var > s->max_var) s->max_var = var;
}

void ipasir_add(void *ptr, int lit) {
    solver_t *s = ptr;
    if (lit != 0) {
        if (s->buf_size == s->buf_cap) {
            s->buf_cap = s->buf_cap * 2 + 8;
            s->buf = realloc(s->buf, s->buf_cap * sizeof(int));
        }
        s->buf[s->buf_size++] = lit;
        ensure_var(s, abs(lit));
        return;
    }
    if (s->n_clauses == s->cap_clauses) {
        s->cap_clauses = s->cap_clauses * 2 + 8;
        s->clauses = realloc(s->clauses, s->cap_clauses * sizeof(clause_t));
    }
    clause_t *c = &s->clauses[s->n_clauses++];
    c->size = s->buf_size;
    c->lits = malloc(s->buf_size * sizeof(int));
    memcpy(c->lits, s->buf, s->buf_size * sizeof(int));
    s->buf_size = 0;
}

void ipasir_assume(void *ptr, int lit) {
    solver_t *s = ptr;
    if (s->n_assumptions == s->cap_assumptions) {
        s->cap_assumptions = s->cap_assumptions * 2 + 8;
        s->assumptions = realloc(s->assumptions, s->cap_assumptions * sizeof(int));
    }
    s->assumptions[s->n_assumptions++] = lit;
    ensure_var(s, abs(lit));
}

static int lit_value(const solver_t *s, int lit) {
    int v = s->value[abs(lit)];
    return lit > 0 ? v : -v;
}

static int check_terminate(solver_t *s) {
    if (s->interrupted) return 1;
    if (!s->terminate) return 0;
    if ((++s->ticks & 63) != 0) return 0;
    if (s->terminate(s->terminate_data)) {
        s->interrupted = 1;
        return 1;
    }
    return 0;
}

/* 10 satisfiable, 20 unsatisfiable, 0 interrupted */
static int search(solver_t *s) {
    if (check_terminate(s)) return 0;
    int n = s->max_var + 1;
    signed char *saved = malloc(n);
    if (!saved) return 0;
    memcpy(saved, s->value, n);
    int result;
    for (;;) { /* unit propagation to fixpoint */
        if (check_terminate(s)) {
            result = 0;
            goto out;
        }
        int unit = 0, conflict = 0;
        for (int i = 0; i < s->n_clauses && !conflict; i++) {
            const clause_t *c = &s->clauses[i];
            int open = 0, last = 0, sat = 0;
            for (int j = 0; j < c->size; j++) {
                int v = lit_value(s, c->lits[j]);
                if (v > 0) {
                    sat = 1;
                    break;
                }
                if (v == 0) {
                    open++;
                    last = c->lits[j];
                }
            }
            if (sat) continue;
            if (open == 0) conflict = 1;
            else if (open == 1 && !unit) unit = last;
        }
        if (conflict) {
            result = 20;
            goto out;
        }
        if (!unit) break;
        s->value[abs(unit)] = unit > 0 ? 1 : -1;
    }
    {
        int var = 0;
        for (int v = 1; v <= s->max_var; v++)
            if (!s->value[v]) {
                var = v;
                break;
            }
        if (!var) {
            result = 10;
            goto out;
        }
        s->value[var] = 1;
        result = search(s);
        if (result == 20) {
            memcpy(s->value, saved, n);
            s->value[var] = -1;
            result = search(s);
        }
    }
out:
    if (result == 20) memcpy(s->value, saved, n);
    free(saved);
    return result;
}

int ipasir_solve(void *ptr) {
    solver_t *s = ptr;
    s->interrupted = 0;
    s->ticks = 0;
    ensure_var(s, 0); /* the assignment array must exist even with no vars */
    memset(s->value, 0, s->value_cap);
    free(s->failed);
    s->failed = NULL;
    s->n_failed = s->n_assumptions;
    if (s->n_assumptions > 0) {
        s->failed = malloc(s->n_assumptions * sizeof(int));
        memcpy(s->failed, s->assumptions, s->n_assumptions * sizeof(int));
    }
    int result = 10;
    for (int i = 0; i < s->n_assumptions; i++) {
        int lit = s->assumptions[i];
        if (lit_value(s, lit) < 0) {
            result = 20;
            break;
        }
        s->value[abs(lit)] = lit > 0 ? 1 : -1;
    }
    if (result != 20) result = search(s);
    s->n_assumptions = 0; /* assumptions hold for a single call */
    if (result != 20) s->n_failed = 0;
    return result;
}

int ipasir_val(void *ptr, int lit) {
    solver_t *s = ptr;
    int var = abs(lit);
    if (var > s->max_var) return 0;
    signed char v = s->value[var];
    return v == 0 ? 0 : (v > 0 ? var : -var);
}

int ipasir_failed(void *ptr, int lit) {
    solver_t *s = ptr;
    for (int i = 0; i < s->n_failed; i++)
        if (s->failed[i] == lit) return 1;
    return 0;
}

void ipasir_set_terminate(void *ptr, void *data, int (*terminate)(void *)) {
    solver_t *s = ptr;
    s->terminate = terminate;
    s->terminate_data = data;
}
