// hott: check .htt files against the prelude, normalize definitions, list lemmas.
//
// Exit codes: 0 ok, 1 type error or unknown name, 2 parse or scope error,
// 3 I/O error, 4 step budget exceeded.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hott/hott.hpp"

namespace {

using namespace hott;

enum Exit { kOk = 0, kTypeError = 1, kParseError = 2, kIoError = 3, kBudget = 4 };

struct Source {
  std::string path;
  std::string text;
};

std::string location(const Source& src, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < src.text.size(); ++i) {
    if (src.text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return src.path + ":" + std::to_string(line) + ":" + std::to_string(col);
}

// Runs `body`, reporting any checker failure against `src`. Returns an exit code.
template <class F>
int guarded(const Source& src, F&& body) {
  try {
    body();
    return kOk;
  } catch (const ParseError& e) {
    std::cerr << location(src, e.offset()) << ": error: " << e.what() << "\n";
    return kParseError;
  } catch (const ScopeError& e) {
    std::cerr << location(src, e.span().begin) << ": error: " << e.what() << "\n";
    return kParseError;
  } catch (const TypeError& e) {
    std::cerr << location(src, e.span ? e.span->begin : 0) << ": error: in '" << e.declaration << "': " << e.what()
              << "\n";
    return kTypeError;
  } catch (const IllFormedAxiom& e) {
    std::cerr << src.path << ": error: " << e.what() << "\n";
    return kTypeError;
  } catch (const StepBudgetExceeded& e) {
    std::cerr << src.path << ": error: " << e.what() << "\n";
    return kBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << src.path << ": error: " << e.what() << "\n";
    return kParseError;
  }
}

std::optional<Source> read_source(const std::string& path) {
  try {
    return Source{path, read_file(path)};
  } catch (const SourceUnreadable& e) {
    std::cerr << "error: " << e.what() << "\n";
    return std::nullopt;
  }
}

bool same_file(const std::string& a, const std::string& b) {
  std::error_code ec;
  return std::filesystem::equivalent(a, b, ec);
}

struct Session {
  std::string prelude_path = default_prelude_path();
  bool no_axioms = false;
  bool trace = false;
  CheckedModule module;

  AxiomSet axioms() const { return no_axioms ? AxiomSet::none() : AxiomSet::all(); }

  int load_prelude() {
    auto src = read_source(prelude_path);
    if (!src) return kIoError;
    return guarded(*src, [&] { load_into(module, src->text, axioms()); });
  }

  int load_file(const Source& src) {
    return guarded(src, [&] {
      std::size_t before = module.declarations().size();
      check_source(module, src.text, 0, {}, validate_axiom);
      if (trace)
        for (std::size_t i = before; i < module.declarations().size(); ++i)
          std::cerr << "checked " << module.declarations()[i].name << "\n";
    });
  }
};

std::string axiom_flag(const CheckedDeclaration& d) {
  if (d.axioms.empty()) return "axiom-free";
  // Canonical axioms in their fixed order, then any others alphabetically.
  std::vector<std::string> names;
  for (const auto& name : kAxiomNames)
    if (d.axioms.count(std::string(name))) names.emplace_back(name);
  for (const auto& name : d.axioms)
    if (!axiom_from_name(name)) names.push_back(name);
  std::string out = "requires:";
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? "," : "") + names[i];
  return out;
}

int cmd_check(Session& s, const std::vector<std::string>& paths) {
  if (int rc = s.load_prelude()) return rc;
  std::size_t prelude_count = s.module.declarations().size();
  std::size_t count = 0;
  for (const auto& path : paths) {
    if (same_file(path, s.prelude_path)) {
      count += prelude_count;
      continue;
    }
    auto src = read_source(path);
    if (!src) return kIoError;
    std::size_t before = s.module.declarations().size();
    if (int rc = s.load_file(*src)) return rc;
    count += s.module.declarations().size() - before;
  }
  std::cout << "ok: " << count << " declarations\n";
  return kOk;
}

int cmd_eval(Session& s, const std::string& path, const std::string& name, std::uint64_t max_steps) {
  if (int rc = s.load_prelude()) return rc;
  auto src = read_source(path);
  if (!src) return kIoError;
  if (!same_file(path, s.prelude_path))
    if (int rc = s.load_file(*src)) return rc;
  const CheckedDeclaration* d = s.module.find(name);
  if (!d || !d->value) {
    std::cerr << "error: " << (d ? "'" + name + "' is an axiom and has no value" : "unknown name '" + name + "'")
              << "\n";
    return kTypeError;
  }
  StepBudget budget{max_steps, 0};
  Context ctx(s.module.environment(), &budget);
  return guarded(*src, [&] { std::cout << print_term(normalize(ctx, *d->value)) << "\n"; });
}

int cmd_lemmas(Session& s) {
  if (int rc = s.load_prelude()) return rc;
  std::cout << "name\tflag\ttype\n";
  for (const auto& d : s.module.declarations())
    std::cout << d.name << "\t" << axiom_flag(d) << "\t" << print_term(d.type) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proof checker for homotopy type theory"};
  app.require_subcommand(1);

  Session session;
  app.add_option("--prelude", session.prelude_path, "Prelude file")->check(CLI::ExistingFile);

  std::vector<std::string> check_paths;
  auto* check = app.add_subcommand("check", "Check files after the prelude");
  check->add_flag("--no-axioms", session.no_axioms, "Disable every axiom and skip gated prelude sections");
  check->add_flag("--trace", session.trace, "Report each checked declaration on stderr");
  check->add_option("files", check_paths, "Files to check")->required();

  std::string eval_path, eval_name;
  std::uint64_t max_steps = 1'000'000;
  auto* eval = app.add_subcommand("eval", "Print the normal form of a definition");
  eval->add_flag("--no-axioms", session.no_axioms, "Disable every axiom");
  eval->add_option("--max-steps", max_steps, "Reduction step budget")->check(CLI::PositiveNumber);
  eval->add_option("file", eval_path, "File declaring the definition")->required();
  eval->add_option("name", eval_name, "Definition to normalize")->required();

  auto* lemmas = app.add_subcommand("lemmas", "List prelude declarations with their axiom dependencies");
  lemmas->add_flag("--no-axioms", session.no_axioms, "Disable every axiom");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kParseError;
  }

  if (*check) return cmd_check(session, check_paths);
  if (*eval) return cmd_eval(session, eval_path, eval_name, max_steps);
  return cmd_lemmas(session);
}
