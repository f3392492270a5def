#include <stdio.h>
#include <string.h>

#include "dman.h"

static const char *SCENE =
    "(patch M :coords (x y))\n"
    "(form w :on M :expr (^ dx dy))\n"
    "(dirac L :two-form w)\n"
    "(check c check-dirac :dirac L)\n";

int main(void) {
    DmanScene *scene = NULL;
    if (dman_scene_parse(SCENE, &scene) != DMAN_STATUS_OK) {
        fprintf(stderr, "parse: %s\n", dman_last_error_message());
        return 10;
    }
    DmanReport *report = NULL;
    if (dman_scene_run(scene, &report) != DMAN_STATUS_OK) {
        return 11;
    }
    char *json = NULL;
    if (dman_report_render(report, DMAN_FORMAT_JSON, false, &json) != DMAN_STATUS_OK) {
        return 12;
    }
    int ok = strstr(json, "\"status\": \"pass\"") != NULL && dman_report_verdict(report) == DMAN_VERDICT_PASS;
    dman_string_free(json);
    dman_report_free(report);
    dman_scene_free(scene);

    DmanScene *bad = NULL;
    DmanStatus s = dman_scene_parse("(dirac L :two-form w)", &bad);
    if (s != DMAN_STATUS_UNKNOWN_REFERENCE || bad != NULL || dman_last_error_line() != 1) {
        return 13;
    }
    printf("%s\n", ok ? "ok" : "mismatch");
    return ok ? 0 : 14;
}
