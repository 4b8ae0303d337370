#include <math.h>
#include <stdio.h>
#include <string.h>

#include "otto.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "check failed at line %d: %s (%s)\n",     \
                    __LINE__, #cond,                                  \
                    otto_last_error() ? otto_last_error() : "");      \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    OttoDensity *rho = NULL;
    CHECK(otto_density_thermal(3.0, &rho) == OTTO_STATUS_OK);
    double e[8];
    CHECK(otto_density_entries(rho, e, 8) == OTTO_STATUS_OK);
    CHECK(fabs(e[3] - tanh(3.0) / 2.0) < 1e-15);
    otto_density_free(rho);

    CHECK(otto_density_thermal(-1.0, &rho) == OTTO_STATUS_INVALID_ARGUMENT);
    CHECK(otto_last_error() != NULL);

    OttoCycle cycle;
    CHECK(otto_run_cycle(22.5, 2.0, 3.0, &cycle) == OTTO_STATUS_OK);
    CHECK(fabs(cycle.du_cycle) < 1e-9);
    CHECK(cycle.max_delta_vs_closed_form < 1e-9);

    OttoProgram *program = NULL;
    CHECK(otto_program_parse("init rc\npd 45\ntomo C\n", &program) == OTTO_STATUS_OK);
    OttoExecution *run = NULL;
    CHECK(otto_program_run(program, &run) == OTTO_STATUS_OK);
    CHECK(otto_execution_snapshot(run, "C", &rho) == OTTO_STATUS_OK);
    CHECK(otto_density_entries(rho, e, 8) == OTTO_STATUS_OK);
    CHECK(fabs(e[0] - 0.5) < 1e-12 && fabs(e[3]) < 1e-12);
    otto_density_free(rho);
    otto_execution_free(run);
    otto_program_free(program);

    OttoReport *report = NULL;
    CHECK(otto_sweep(NULL, 0, 2.0, 3.0, 0.0, 0, &report) == OTTO_STATUS_OK);
    char *csv = NULL;
    CHECK(otto_report_emit(report, OTTO_FORMAT_CSV, &csv) == OTTO_STATUS_OK);
    CHECK(strncmp(csv, "theta_v_deg,kappa,r,", 20) == 0);
    otto_string_free(csv);
    otto_report_free(report);

    printf("ok %s\n", otto_version());
    return 0;
}
