#ifndef IGC_H
#define IGC_H

/* C interface of the information-geometry core. All functionality is
 * reached through igc_run: the request is a JSON document selecting an
 * operation ("op") plus its parameters, the reply is a JSON document.
 * Results are opaque handles owned by the caller until igc_result_free. */

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define IGC_API __declspec(dllexport)
#else
#define IGC_API __attribute__((visibility("default")))
#endif

typedef struct igc_result igc_result;

/* Never returns NULL; inspect igc_result_code for the outcome. */
IGC_API igc_result* igc_run(const char* request_json);

/* 0 = success, 1 = input validation failure, 2 = numerical failure. */
IGC_API int igc_result_code(const igc_result* r);

/* JSON reply; owned by the result handle. */
IGC_API const char* igc_result_json(const igc_result* r);

IGC_API void igc_result_free(igc_result* r);

IGC_API const char* igc_version(void);

#ifdef __cplusplus
}
#endif

#endif /* IGC_H */
