/* Minimal consumer of the C ABI.
 *
 * Build (from the repository root, after `cargo build -p cubulate-ffi`):
 *
 *   gcc -I crates/ffi/include crates/ffi/examples/demo.c \
 *       target/debug/libcubulate_ffi.a -lm -o demo
 */
#include "cubulate.h"
#include <stdio.h>

int main(void) {
    printf("cubulate %s\n", cubulate_version());

    const char *input =
        "{\"vertices\":[\"F\"],\"edges\":[{\"id\":\"s\",\"from\":\"F\","
        "\"to\":\"F\",\"w_from\":[1,0],\"w_to\":[2,0]}]}";

    CubulateReport *report = NULL;
    CubulateStatus status = cubulate_tubular_analyze(input, true, 0, &report);
    if (status != CUBULATE_STATUS_OK) {
        fprintf(stderr, "analysis failed (%d): %s\n", (int)status,
                cubulate_report_error(report));
        cubulate_report_free(report);
        return 1;
    }
    fputs(cubulate_report_text(report), stdout);
    cubulate_report_free(report);
    return 0;
}
