#include "cwb/cwb.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "cwb/ambient/ambient.hpp"
#include "cwb/holonomy/holonomy.hpp"
#include "cwb/report/report.hpp"

struct cwb_chart {
  cwb::chart::Chart chart;
};

struct cwb_session {
  cwb::report::RunConfig config;
  cwb::report::Format format = cwb::report::Format::Text;
};

namespace {

thread_local std::string g_last_error;

cwb_status fail(cwb_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

/// Runs f, mapping exceptions onto status codes.
template <class F>
cwb_status guarded(F&& f) {
  using namespace cwb;
  try {
    g_last_error.clear();
    f();
    return CWB_OK;
  } catch (const sym::SyntaxError& e) {
    return fail(CWB_E_PARSE, e.what());
  } catch (const sym::UnknownVariable& e) {
    return fail(CWB_E_PARSE, e.what());
  } catch (const chart::SymmetryConflict& e) {
    return fail(CWB_E_PARSE, e.what());
  } catch (const chart::DimensionMismatch& e) {
    return fail(CWB_E_PARSE, e.what());
  } catch (const chart::MissingCoordinate& e) {
    return fail(CWB_E_PARSE, e.what());
  } catch (const chart::UnknownChart& e) {
    return fail(CWB_E_ARGUMENT, e.what());
  } catch (const chart::DegenerateMetricAtPoint& e) {
    return fail(CWB_E_MATH, e.what());
  } catch (const chart::SignatureMismatch& e) {
    return fail(CWB_E_MATH, e.what());
  } catch (const hol::SpanMismatch& e) {
    return fail(CWB_E_MATH, e.what());
  } catch (const sym::DependencyError& e) {
    return fail(CWB_E_MATH, e.what());
  } catch (const std::domain_error& e) {
    return fail(CWB_E_MATH, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(CWB_E_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(CWB_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CWB_E_INTERNAL, e.what());
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("null argument: ") + what);
}

}  // namespace

extern "C" {

const char* cwb_last_error(void) { return g_last_error.c_str(); }

const char* cwb_version(void) { return "1.0.0"; }

void cwb_string_free(char* s) { std::free(s); }

cwb_status cwb_chart_parse(const char* text, cwb_chart** out) {
  return guarded([&] {
    require(text && out, "text/out");
    *out = new cwb_chart{cwb::chart::parse_chart(text)};
  });
}

cwb_status cwb_chart_builtin(const char* name, cwb_chart** out) {
  return guarded([&] {
    require(name && out, "name/out");
    *out = new cwb_chart{cwb::chart::builtin_chart(name)};
  });
}

cwb_status cwb_builtin_names(char** out) {
  return guarded([&] {
    require(out, "out");
    std::string s;
    for (const auto& n : cwb::chart::builtin_chart_names()) s += n + "\n";
    *out = dup(s);
  });
}

cwb_status cwb_chart_rescale(const cwb_chart* chart, const char* factor, cwb_chart** out) {
  return guarded([&] {
    require(chart && factor && out, "chart/factor/out");
    *out = new cwb_chart{cwb::report::rescale(chart->chart, factor)};
  });
}

cwb_status cwb_chart_dim(const cwb_chart* chart, size_t* out) {
  return guarded([&] {
    require(chart && out, "chart/out");
    *out = chart->chart.dim();
  });
}

cwb_status cwb_chart_print(const cwb_chart* chart, char** out) {
  return guarded([&] {
    require(chart && out, "chart/out");
    *out = dup(cwb::chart::print_chart(chart->chart));
  });
}

void cwb_chart_free(cwb_chart* chart) { delete chart; }

cwb_status cwb_session_create(const cwb_chart* chart, cwb_session** out) {
  return guarded([&] {
    require(chart && out, "chart/out");
    auto* s = new cwb_session;
    s->config.chart = chart->chart;
    *out = s;
  });
}

void cwb_session_free(cwb_session* session) { delete session; }

cwb_status cwb_session_add_point(cwb_session* session, const char* text) {
  return guarded([&] {
    require(session && text, "session/text");
    session->config.points.push_back(cwb::chart::parse_point(text, session->config.chart));
  });
}

cwb_status cwb_session_add_field(cwb_session* session, const char* text) {
  return guarded([&] {
    require(session && text, "session/text");
    session->config.fields.push_back(cwb::report::parse_field(session->config.chart, text));
  });
}

cwb_status cwb_session_set_option(cwb_session* session, cwb_option option, int value) {
  return guarded([&] {
    require(session, "session");
    switch (option) {
      case CWB_OPT_MAX_ORDER:
        if (value < 0) throw std::invalid_argument("max order must be nonnegative");
        session->config.max_order = value;
        return;
      case CWB_OPT_TRUNCATION:
        if (value < 0)
          session->config.truncation.reset();
        else
          session->config.truncation = value;
        return;
      case CWB_OPT_FORMAT:
        if (value != CWB_FORMAT_TEXT && value != CWB_FORMAT_JSONL) throw std::invalid_argument("unknown format");
        session->format = value == CWB_FORMAT_TEXT ? cwb::report::Format::Text : cwb::report::Format::Jsonl;
        return;
    }
    throw std::invalid_argument("unknown option");
  });
}

cwb_status cwb_tensor_component(const cwb_chart* chart, const char* which, const char* point, const size_t* index,
                                size_t rank, char** out) {
  return guarded([&] {
    require(chart && which && point && out && (index || rank == 0), "chart/which/point/index/out");
    cwb::report::RunConfig cfg;
    cfg.chart = chart->chart;
    cfg.which = which;
    cfg.points.push_back(cwb::chart::parse_point(point, cfg.chart));
    const std::size_t n = cfg.chart.dim();
    std::string key;
    for (std::size_t k = 0; k < rank; ++k) {
      if (index[k] >= n) throw std::invalid_argument("index out of range");
      if (k) key += ",";
      key += cfg.chart.coords[index[k]];
    }
    auto records = cwb::report::tensor_report(cfg);
    if (records.front()["slots"].get<std::string>().size() != rank)
      throw std::invalid_argument("index rank does not match tensor '" + cfg.which + "'");
    std::string value = "0";
    for (const auto& r : records)
      if (r["record"] == "component" && r["index"] == key) value = r["value"].get<std::string>();
    *out = dup(value);
  });
}

cwb_status cwb_run_tensor(const cwb_session* session, const char* which, char** out) {
  return guarded([&] {
    require(session && which && out, "session/which/out");
    auto cfg = session->config;
    cfg.which = which;
    *out = dup(cwb::report::render(cwb::report::tensor_report(cfg), session->format));
  });
}

cwb_status cwb_run_holonomy(const cwb_session* session, char** out) {
  return guarded([&] {
    require(session && out, "session/out");
    *out = dup(cwb::report::render(cwb::report::holonomy_report(session->config), session->format));
  });
}

cwb_status cwb_run_ambient(const cwb_session* session, char** out) {
  return guarded([&] {
    require(session && out, "session/out");
    *out = dup(cwb::report::render(cwb::report::ambient_report(session->config), session->format));
  });
}

cwb_status cwb_run_classify_e(const cwb_session* session, char** out) {
  return guarded([&] {
    require(session && out, "session/out");
    *out = dup(cwb::report::render(cwb::report::classify_e_report(session->config), session->format));
  });
}

cwb_status cwb_run_verify(const cwb_session* session, const char* suite, int flags, char** out, int* passed) {
  return guarded([&] {
    require(session && out && passed, "session/out/passed");
    auto cfg = session->config;
    cfg.which = suite ? suite : "all";
    cwb::report::VerifyOptions opts;
    opts.corrupt_bach = (flags & CWB_VERIFY_CORRUPT_BACH) != 0;
    auto res = cwb::report::verify(cfg, opts);
    *out = dup(cwb::report::render(res.records, session->format));
    *passed = res.all_pass() ? 1 : 0;
  });
}

}  // extern "C"
