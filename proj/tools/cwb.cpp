#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cwb/cwb.h"
#include "json.hpp"

namespace {

constexpr int kExitVerifyFailed = 1;
constexpr int kExitParse = 2;
constexpr int kExitMath = 3;
constexpr int kExitInternal = 4;

struct ChartDeleter {
  void operator()(cwb_chart* c) const { cwb_chart_free(c); }
};
struct SessionDeleter {
  void operator()(cwb_session* s) const { cwb_session_free(s); }
};
using ChartPtr = std::unique_ptr<cwb_chart, ChartDeleter>;
using SessionPtr = std::unique_ptr<cwb_session, SessionDeleter>;

struct Options {
  std::string chart;
  std::vector<std::string> points;
  std::vector<std::string> fields;
  int max_order = 4;
  std::optional<int> truncation;
  std::string which;
  std::string factor;
  std::string format = "text";
  bool corrupt_bach = false;
};

class Failure {
 public:
  Failure(cwb_status s, std::string msg) : status(s), message(std::move(msg)) {}
  cwb_status status;
  std::string message;
};

void check(cwb_status s) {
  if (s != CWB_OK) throw Failure(s, cwb_last_error());
}

int exit_code(cwb_status s) {
  switch (s) {
    case CWB_OK:
      return 0;
    case CWB_E_ARGUMENT:
    case CWB_E_PARSE:
      return kExitParse;
    case CWB_E_MATH:
      return kExitMath;
    case CWB_E_INTERNAL:
      return kExitInternal;
  }
  return kExitInternal;
}

std::optional<std::string> read_file(const std::string& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) return std::nullopt;
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ChartPtr load_chart(const std::string& spec) {
  cwb_chart* c = nullptr;
  if (auto text = read_file(spec))
    check(cwb_chart_parse(text->c_str(), &c));
  else
    check(cwb_chart_builtin(spec.c_str(), &c));
  return ChartPtr(c);
}

SessionPtr make_session(const cwb_chart* chart, const Options& o) {
  cwb_session* s = nullptr;
  check(cwb_session_create(chart, &s));
  SessionPtr session(s);
  for (const auto& p : o.points) {
    auto text = read_file(p);
    check(cwb_session_add_point(s, text ? text->c_str() : p.c_str()));
  }
  for (const auto& f : o.fields) check(cwb_session_add_field(s, f.c_str()));
  check(cwb_session_set_option(s, CWB_OPT_MAX_ORDER, o.max_order));
  check(cwb_session_set_option(s, CWB_OPT_TRUNCATION, o.truncation.value_or(-1)));
  check(cwb_session_set_option(s, CWB_OPT_FORMAT, o.format == "jsonl" ? CWB_FORMAT_JSONL : CWB_FORMAT_TEXT));
  return session;
}

std::string take(char* s) {
  std::string out(s ? s : "");
  cwb_string_free(s);
  return out;
}

int run(const std::string& command, const Options& o) {
  ChartPtr chart = load_chart(o.chart);
  if (command == "rescale") {
    cwb_chart* r = nullptr;
    check(cwb_chart_rescale(chart.get(), o.factor.c_str(), &r));
    ChartPtr rescaled(r);
    char* text = nullptr;
    check(cwb_chart_print(rescaled.get(), &text));
    std::string s = take(text);
    if (o.format == "jsonl")
      std::cout << nlohmann::ordered_json{{"record", "chart"}, {"factor", o.factor}, {"text", s}}.dump() << '\n';
    else
      std::cout << s;
    return 0;
  }
  SessionPtr session = make_session(chart.get(), o);
  char* out = nullptr;
  int passed = 1;
  if (command == "tensor")
    check(cwb_run_tensor(session.get(), o.which.c_str(), &out));
  else if (command == "holonomy")
    check(cwb_run_holonomy(session.get(), &out));
  else if (command == "ambient")
    check(cwb_run_ambient(session.get(), &out));
  else if (command == "classify-e")
    check(cwb_run_classify_e(session.get(), &out));
  else if (command == "verify")
    check(cwb_run_verify(session.get(), o.which.empty() ? nullptr : o.which.c_str(),
                         o.corrupt_bach ? CWB_VERIFY_CORRUPT_BACH : 0, &out, &passed));
  std::cout << take(out);
  return passed ? 0 : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact conformal tractor, holonomy and ambient metric computations"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--chart", o.chart, "chart file or built-in chart name")->required();
    sub->add_option("--point", o.points, "point file or inline `coord = value ...` text");
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "jsonl"}));
  };

  auto* tensor = app.add_subcommand("tensor", "print a curvature tensor symbolically or at points");
  common(tensor);
  tensor
      ->add_option("--which", o.which,
                   "christoffel|riemann|ricci|scalar|schouten|cotton|weyl|bach|obstruction")
      ->required();

  auto* holonomy = app.add_subcommand("holonomy", "infinitesimal conformal holonomy at points");
  common(holonomy);
  holonomy->add_option("--max-order", o.max_order, "derivative order")->check(CLI::NonNegativeNumber);

  auto* ambient = app.add_subcommand("ambient", "ambient metric jet, obstruction and tractor identification");
  common(ambient);
  ambient->add_option("--truncation", o.truncation, "truncation order K (default n/2 + 1)")
      ->check(CLI::PositiveNumber);

  auto* rescale = app.add_subcommand("rescale", "print the chart with metric factor^2 g");
  rescale->add_option("--chart", o.chart, "chart file or built-in chart name")->required();
  rescale->add_option("--factor", o.factor, "conformal factor expression")->required();
  rescale->add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "jsonl"}));

  auto* verify = app.add_subcommand("verify", "run the verification suite; exit 1 on a failed check");
  common(verify);
  verify->add_option("--max-order", o.max_order, "holonomy derivative order")->check(CLI::NonNegativeNumber);
  verify->add_option("--which", o.which, "suite")->check(
      CLI::IsMember({"all", "obstruction", "einstein", "identification"}));
  verify->add_flag("--corrupt-bach", o.corrupt_bach, "negative control: add g to the obstruction");

  auto* classify = app.add_subcommand("classify-e", "classify the holonomy distribution on sampled points");
  common(classify);
  classify->add_option("--max-order", o.max_order, "holonomy derivative order")->check(CLI::NonNegativeNumber);
  classify->add_option("--field", o.fields, "spanning field as comma-separated components");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, o);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return exit_code(f.status);
  }
}
