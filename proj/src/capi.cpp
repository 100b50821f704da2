#include <cstring>
#include <string>

#include "config.hpp"
#include "experiments.hpp"
#include "gridgas/gridgas.h"
#include "homspace.hpp"
#include "scene.hpp"
#include "stats.hpp"

struct gg_model {
  gg::ExperimentConfig cfg;
};

namespace {

thread_local std::string g_error;

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

template <class F>
gg_status guarded(F&& f) {
  g_error.clear();
  try {
    return f();
  } catch (const gg::ConfigError& e) {
    g_error = e.what();
    return GG_CONFIG_ERROR;
  } catch (const gg::FieldError& e) {
    g_error = e.what();
    return GG_CONFIG_ERROR;
  } catch (const gg::GridError& e) {
    g_error = e.what();
    return GG_CONFIG_ERROR;
  } catch (const gg::OrbitError& e) {
    g_error = std::string("component orbit too large: ") + e.what();
    return GG_NUMERIC_ERROR;
  } catch (const gg::SamplingError& e) {
    g_error = e.what();
    return GG_NUMERIC_ERROR;
  } catch (const gg::SceneError& e) {
    g_error = e.what();
    return GG_NUMERIC_ERROR;
  } catch (const gg::StatError& e) {
    g_error = e.what();
    return GG_NUMERIC_ERROR;
  } catch (const std::exception& e) {
    g_error = e.what();
    return GG_INTERNAL_ERROR;
  } catch (...) {
    g_error = "unknown error";
    return GG_INTERNAL_ERROR;
  }
}

using Runner = gg::Artifact (*)(const gg::Presentation&, const gg::RunSettings&);

gg_status run(Runner fn, const gg_model* m, const char* options, char** report, char** csv) {
  if (!m || !report) {
    g_error = "null argument";
    return GG_INVALID_ARGUMENT;
  }
  return guarded([&] {
    gg::RunSettings over = gg::parse_run_text(options ? options : "");
    gg::Artifact a = fn(m->cfg.presentation, gg::merge_run(m->cfg.run, over));
    *report = dup(a.report.dump(2) + "\n");
    if (csv) *csv = a.csv.empty() ? nullptr : dup(a.csv);
    return a.pass ? GG_OK : GG_CHECK_FAILED;
  });
}

}  // namespace

extern "C" {

const char* gg_version(void) { return "1.0.0"; }
int gg_schema_version(void) { return gg::kSchemaVersion; }
const char* gg_last_error(void) { return g_error.c_str(); }

gg_status gg_model_load(const char* config_json, gg_model** out) {
  if (!config_json || !out) {
    g_error = "null argument";
    return GG_INVALID_ARGUMENT;
  }
  return guarded([&] {
    *out = new gg_model{gg::parse_config_text(config_json)};
    return GG_OK;
  });
}

gg_status gg_model_load_file(const char* path, gg_model** out) {
  if (!path || !out) {
    g_error = "null argument";
    return GG_INVALID_ARGUMENT;
  }
  return guarded([&] {
    *out = new gg_model{gg::parse_config(path)};
    return GG_OK;
  });
}

void gg_model_free(gg_model* model) { delete model; }

gg_status gg_model_presentation(const gg_model* model, char** json_out) {
  if (!model || !json_out) {
    g_error = "null argument";
    return GG_INVALID_ARGUMENT;
  }
  return guarded([&] {
    *json_out = dup(gg::presentation_to_json(model->cfg.presentation).dump(2) + "\n");
    return GG_OK;
  });
}

gg_status gg_analyze(const gg_model* m, const char* o, char** r) { return run(gg::run_analyze, m, o, r, nullptr); }
gg_status gg_simulate(const gg_model* m, const char* o, char** r, char** c) { return run(gg::run_simulate, m, o, r, c); }
gg_status gg_limit_tail(const gg_model* m, const char* o, char** r, char** c) {
  return run(gg::run_limit_tail, m, o, r, c);
}
gg_status gg_flight(const gg_model* m, const char* o, char** r, char** c) { return run(gg::run_flight, m, o, r, c); }
gg_status gg_siegel_check(const gg_model* m, const char* o, char** r) {
  return run(gg::run_siegel_check, m, o, r, nullptr);
}
gg_status gg_compare(const gg_model* m, const char* o, char** r) { return run(gg::run_compare, m, o, r, nullptr); }

void gg_string_free(char* s) { std::free(s); }

}  // extern "C"
