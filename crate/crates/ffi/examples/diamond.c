/* Plans on a diamond, blocks the route it took, and replans.
 *
 *   cc examples/diamond.c -Iinclude ../../target/debug/liblgls_ffi.a -lpthread -ldl -lm
 */
#include <math.h>
#include <stdio.h>

#include "lgls.h"

struct world {
    int blocked; /* 1 once the edge 1-3 is blocked */
};

static double cost(void *data, uint32_t u, uint32_t v) {
    const struct world *w = data;
    if (w->blocked && ((u == 1 && v == 3) || (u == 3 && v == 1)))
        return INFINITY;
    return 1.0;
}

static int check(LglsStatus s) {
    if (s != LGLS_STATUS_OK) {
        fprintf(stderr, "%s: %s\n", lgls_status_message(s), lgls_last_error_message());
        return 1;
    }
    return 0;
}

int main(void) {
    struct world w = {0};
    LglsGraphBuilder *b = lgls_graph_builder_new(4, true);
    const uint32_t edges[4][2] = {{0, 1}, {0, 2}, {1, 3}, {2, 3}};
    for (int i = 0; i < 4; i++)
        if (check(lgls_graph_builder_add_edge(b, edges[i][0], edges[i][1], 1.0)))
            return 1;

    LglsPlannerOptions opts = lgls_planner_options_default();
    opts.check_invariants = true;
    LglsPlanner *p = NULL;
    if (check(lgls_planner_new(b, &opts, 0, 3, NULL, 0, cost, &w, &p)))
        return 1;
    lgls_graph_builder_free(b);

    LglsPlanResult r;
    uint32_t path[4];
    size_t len = 0;
    if (check(lgls_planner_plan(p, &r)) || check(lgls_planner_path(p, path, 4, &len)))
        return 1;
    printf("episode 0: cost %.1f via %u, %llu evaluations\n", r.cost, path[1],
           (unsigned long long)r.edge_evaluations);

    w.blocked = 1;
    const uint32_t changed[2] = {1, 3};
    if (check(lgls_planner_notify(p, changed, 1)) || check(lgls_planner_plan(p, &r)) ||
        check(lgls_planner_path(p, path, 4, &len)))
        return 1;
    printf("episode 1: cost %.1f via %u, %llu evaluations\n", r.cost, path[1],
           (unsigned long long)r.edge_evaluations);

    lgls_planner_free(p);
    return !(r.solved && r.cost == 2.0 && path[1] == 2);
}
