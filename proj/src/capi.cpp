#include "igc/igc.h"

#include <new>
#include <string>

#include "igc/json_io.hpp"

struct igc_result {
  int code;
  std::string body;
};

extern "C" {

igc_result* igc_run(const char* request_json) {
  auto* r = new (std::nothrow) igc_result{2, {}};
  if (!r) return nullptr;
  if (!request_json) {
    r->code = 1;
    r->body = "{\"ok\":false,\"error\":{\"code\":1,\"message\":\"null request\"}}";
    return r;
  }
  try {
    r->body = igc::run_request(request_json, &r->code);
  } catch (...) {
    r->code = 2;
    r->body = "{\"ok\":false,\"error\":{\"code\":2,\"message\":\"internal failure\"}}";
  }
  return r;
}

int igc_result_code(const igc_result* r) { return r ? r->code : 2; }

const char* igc_result_json(const igc_result* r) { return r ? r->body.c_str() : ""; }

void igc_result_free(igc_result* r) { delete r; }

const char* igc_version(void) { return "1.0.0"; }

}  // extern "C"
