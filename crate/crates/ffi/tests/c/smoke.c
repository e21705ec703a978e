#include <stdio.h>
#include <string.h>
#include "openfol.h"

static const char *CG =
    "- (1) forall x (x = x)        =I\n"
    "- (2) godzilla = godzilla     1 UE godzilla\n"
    "- (3) exists x (x = godzilla) 2 EI\n";

int main(void) {
    OpenfolScript *script = NULL;
    OpenfolVerdict *verdict = NULL;
    char *json = NULL;

    if (openfol_script_parse(CG, &script) != OPENFOL_STATUS_OK) return 10;
    if (openfol_check(script, OPENFOL_MODE_CLASSICAL, &verdict) != OPENFOL_STATUS_OK) return 11;
    if (!openfol_verdict_accepted(verdict)) return 12;
    openfol_verdict_free(verdict);

    if (openfol_check(script, OPENFOL_MODE_OPEN, &verdict) != OPENFOL_STATUS_REJECTED) return 13;
    if (openfol_verdict_json(verdict, &json) != OPENFOL_STATUS_OK) return 14;
    if (!strstr(json, "RuleUnavailableInMode")) return 15;
    openfol_string_free(json);
    openfol_verdict_free(verdict);
    openfol_script_free(script);

    const char *premises[] = {"a = b", "P(a)"};
    if (openfol_search_json(premises, 2, "P(b)", OPENFOL_PROFILE_TOTAL, 2, &json) != OPENFOL_STATUS_OK) return 16;
    openfol_string_free(json);

    if (openfol_format_formula("forall x F(", &json) != OPENFOL_STATUS_INVALID_INPUT) return 17;
    if (openfol_last_error_message() == NULL) return 18;

    printf("%s\n", openfol_version());
    return 0;
}
