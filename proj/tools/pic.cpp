// pic: command-line front end for the polynomial ideal code library.

#include <iostream>

#include <CLI11.hpp>

#include "pic/pic.hpp"

namespace {

struct Args {
  std::string spec, message, in, out, algorithm = "capacity", errors, channel = "random_symbol", pattern;
  std::optional<std::size_t> m, r;
  std::optional<double> epsilon;
  std::uint64_t seed = 0, enum_cap = 1000000;
  std::size_t trials = 10;
  bool json = false, no_timing = false;
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    pic::write_text_file(path, text);
  }
}

pic::DecodeOptions decode_options(const Args& a) {
  pic::DecodeOptions o;
  o.algorithm = pic::parse_algorithm(a.algorithm);
  o.m = a.m;
  o.r = a.r;
  o.epsilon = a.epsilon;
  o.enum_cap = a.enum_cap;
  o.timing = !a.no_timing;
  return o;
}

int cmd_verify(const Args& a) {
  const auto spec = pic::parse_spec(pic::read_json_file(a.spec));
  const auto checks = pic::verify_spec(spec, a.m, a.seed);
  bool ok = true;
  pic::json report = pic::json::array();
  for (const auto& c : checks) {
    ok = ok && c.passed;
    report.push_back({{"check", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    if (!a.json) std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
  }
  if (a.json) {
    emit(a.out, pic::json{{"ok", ok}, {"checks", report}}.dump(2) + "\n");
  } else if (!a.out.empty()) {
    pic::write_text_file(a.out, pic::json{{"ok", ok}, {"checks", report}}.dump(2) + "\n");
  }
  return ok ? 0 : 2;
}

int cmd_encode(const Args& a) {
  const auto code = pic::build_code(pic::parse_spec(pic::read_json_file(a.spec)));
  const auto f = pic::parse_message(pic::read_json_file(a.message), code);
  emit(a.out, pic::codeword_to_json(pic::encode(code, f), code.s()).dump() + "\n");
  return 0;
}

int cmd_corrupt(const Args& a) {
  const auto code = pic::build_code(pic::parse_spec(pic::read_json_file(a.spec)));
  const auto c = pic::parse_codeword(pic::read_json_file(a.in), code);
  pic::Codeword y;
  const auto kind = pic::parse_channel(a.channel);
  if (kind == pic::ChannelKind::adversarial_file) {
    if (a.pattern.empty()) throw pic::ValidationError("adversarial_file channel requires --pattern");
    y = pic::apply_pattern(code, c, pic::read_json_file(a.pattern));
  } else {
    const auto [lo, hi] = pic::parse_range(a.errors.empty() ? "0" : a.errors);
    if (lo != hi) throw pic::ValidationError("corrupt takes a single error count");
    y = pic::corrupt(code, c, pic::ChannelModel{kind, lo, a.seed});
  }
  emit(a.out, pic::codeword_to_json(y, code.s()).dump() + "\n");
  return 0;
}

int cmd_decode(const Args& a) {
  const auto code = pic::build_code(pic::parse_spec(pic::read_json_file(a.spec)));
  const auto y = pic::parse_codeword(pic::read_json_file(a.in), code);
  std::optional<pic::Poly> ref;
  if (!a.message.empty()) ref = pic::parse_message(pic::read_json_file(a.message), code);
  const auto opt = decode_options(a);
  const pic::Decoder dec(code, opt);
  const auto o = dec.decode(y);
  emit(a.out, pic::outcome_to_json(dec, o, opt, ref).dump() + "\n");
  return 0;
}

int cmd_sweep(const Args& a) {
  const auto code = pic::build_code(pic::parse_spec(pic::read_json_file(a.spec)));
  const auto [lo, hi] = pic::parse_range(a.errors.empty() ? "0" : a.errors);
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!a.out.empty() && a.out != "-") {
    file.open(a.out);
    if (!file) throw pic::ParseError("cannot write " + a.out);
    os = &file;
  }
  *os << pic::sweep_csv_header() << std::flush;
  pic::sweep(code, decode_options(a), lo, hi, a.trials, a.seed, [&](const pic::SweepRow& row) {
    *os << pic::sweep_csv_row(row) << std::flush;
    for (const auto& note : row.notes) std::cerr << "errors=" << row.errors << ": " << note << '\n';
  });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polynomial ideal codes: encode, corrupt, list-decode, sweep"};
  app.require_subcommand(1);
  Args a;

  auto* verify = app.add_subcommand("verify", "run every structural check for a code spec");
  auto* encode = app.add_subcommand("encode", "encode a message file");
  auto* corrupt = app.add_subcommand("corrupt", "pass a codeword through a channel");
  auto* decode = app.add_subcommand("decode", "list-decode a received word");
  auto* sweep = app.add_subcommand("sweep", "success rate per error count, as CSV");

  for (auto* sc : {verify, encode, corrupt, decode, sweep}) {
    sc->add_option("--spec", a.spec, "code spec JSON")->required()->check(CLI::ExistingFile);
    sc->add_option("--out", a.out, "output file (stdout if omitted)");
  }
  verify->add_option("--m", a.m, "capacity parameter m to check");
  verify->add_option("--seed", a.seed);
  verify->add_flag("--json", a.json, "JSON report");

  encode->add_option("--message", a.message, "message JSON")->required();

  corrupt->add_option("--in", a.in, "codeword JSON")->required();
  corrupt->add_option("--errors", a.errors, "number of symbol errors");
  corrupt->add_option("--seed", a.seed);
  corrupt->add_option("--channel", a.channel, "random_symbol | burst | adversarial_file");
  corrupt->add_option("--pattern", a.pattern, "error pattern JSON for adversarial_file");

  for (auto* sc : {decode, sweep}) {
    sc->add_option("--algorithm", a.algorithm, "johnson | capacity");
    sc->add_option("--m", a.m, "capacity: number of composed operators");
    sc->add_option("--r", a.r, "johnson: multiplicity");
    sc->add_option("--epsilon", a.epsilon, "johnson: slack, picks r");
    sc->add_option("--enum-cap", a.enum_cap, "capacity: max candidates to enumerate");
    sc->add_flag("--no-timing", a.no_timing, "report 0 for timings (byte-identical output)");
  }
  decode->add_option("--in", a.in, "received word JSON")->required();
  decode->add_option("--message", a.message, "transmitted message, adds exact_match");

  sweep->add_option("--errors", a.errors, "error range A..B")->required();
  sweep->add_option("--trials", a.trials);
  sweep->add_option("--seed", a.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*verify) return cmd_verify(a);
    if (*encode) return cmd_encode(a);
    if (*corrupt) return cmd_corrupt(a);
    if (*decode) return cmd_decode(a);
    return cmd_sweep(a);
  } catch (const pic::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 1;
  } catch (const pic::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const pic::GuaranteeViolation& e) {
    std::cerr << "guarantee violation: " << e.what() << '\n';
    return 3;
  }
}
