#include "serrelab/cli.hpp"

#include "serrelab/towers.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace serrelab {

namespace {

using nlohmann::ordered_json;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::uint64_t env_seed() {
  if (const char* s = std::getenv("SERRELAB_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw Error("SERRELAB_SEED is not an unsigned integer");
    }
  }
  return 0;
}

std::uint64_t pick_seed(const std::optional<std::uint64_t>& flag,
                        const std::optional<std::uint64_t>& declared) {
  if (flag) return *flag;
  if (declared) return *declared;
  return env_seed();
}

/// Resolve --left/--right: a declared word name, else a word expression over
/// the first declared alphabet (parsed by appending a synthetic declaration).
Word resolve_word(const std::string& file_text, const Document& doc, const std::string& spec,
                  int ordinal) {
  if (const Declaration* d = doc.find(Declaration::Kind::Word, spec)) return d->word;
  std::string alpha_name;
  for (const auto& d : doc.decls)
    if (d.kind == Declaration::Kind::Alphabet) {
      alpha_name = d.name;
      break;
    }
  if (alpha_name.empty()) throw Error("no alphabet declared in the file");
  std::string name = "cliq" + std::to_string(ordinal);
  Document ext = parse(file_text + "\nword " + name + " in " + alpha_name + " = " + spec + "\n");
  return ext.find(Declaration::Kind::Word, name)->word;
}

Word remap_to(const AlphabetRef& target, const Word& w) {
  if (same_alphabet(w.alphabet(), target)) return w;
  std::vector<Syllable> syls;
  for (const auto& s : w.syllables()) {
    int idx = target->index_of(w.alphabet()->generators()[static_cast<std::size_t>(s.gen)]);
    if (idx < 0)
      throw Error("generator " + w.alphabet()->generators()[static_cast<std::size_t>(s.gen)] +
                  " is not a generator of the tower");
    syls.push_back({idx, s.exp});
  }
  return Word::from_syllables(target, syls);
}

TaskResult error_result(std::string task, std::uint64_t seed, const std::string& message) {
  TaskResult r;
  r.task = std::move(task);
  r.status = "error";
  r.seed = seed;
  r.detail["message"] = message;
  return r;
}

TaskResult cmd_check(const std::string& file) {
  TaskResult r;
  r.task = "check " + file;
  Document doc = parse(slurp(file));
  r.status = "verified";
  r.detail["declarations"] = doc.decls.size();
  ordered_json names = ordered_json::array();
  for (const auto& d : doc.decls)
    if (d.kind == Declaration::Kind::Task) names.push_back(d.task->name);
  r.detail["tasks"] = names;
  return r;
}

TaskResult cmd_conj(const std::string& file, const std::string& left, const std::string& right,
                    bool pm) {
  TaskResult r;
  r.task = "conj " + file;
  std::string text = slurp(file);
  Document doc = parse(text);
  Word lw = resolve_word(text, doc, left, 0);
  Word rw = resolve_word(text, doc, right, 1);
  if (!same_alphabet(lw.alphabet(), rw.alphabet()))
    throw Error("left and right words live over different alphabets");
  r.detail["left"] = lw.str();
  r.detail["right"] = rw.str();
  r.detail["pm"] = pm;
  auto cert = are_conjugate(lw, rw, pm);
  r.detail["conjugate"] = cert.has_value();
  if (cert) {
    r.detail["conjugator"] = cert->conjugator.str();
    r.detail["sign"] = cert->sign;
    r.status = "verified";
  } else {
    r.status = "refuted";
  }
  return r;
}

TaskResult cmd_verify_magnus(std::uint64_t seed) {
  TaskResult r;
  r.task = "verify magnus-pair";
  r.seed = seed;
  MagnusPairFixture f = magnus_pair_gog();
  MagnusReport rep = verify_magnus_pair(f);
  r.detail["non_conjugate"] = rep.non_conjugate;
  r.detail["ncl_u_from_v"] = rep.ncl_u_from_v;
  r.detail["ncl_v_from_u"] = rep.ncl_v_from_u;
  r.detail["strict"] = rep.strict;
  r.detail["surjective"] = rep.surjective;
  r.detail["images_conjugate"] = rep.images_conjugate;
  r.detail["failures"] = rep.failures;
  r.status = rep.verdict ? "verified" : "refuted";
  return r;
}

TaskResult cmd_verify_cdouble(const std::string& w_expr, int count, int pairs,
                              std::uint64_t seed) {
  TaskResult r;
  r.task = "verify c-double";
  r.seed = seed;
  Document wdoc = parse("alphabet F { x, y }\nword w in F = " + w_expr + "\n");
  Word w = wdoc.find(Declaration::Kind::Word, "w")->word;
  CDoubleFixture f = c_double(w, true);
  CDoubleReport rep = verify_c_double(f, count, pairs, seed);
  r.detail["w"] = w.str();
  r.detail["homs_checked"] = rep.homs_checked;
  r.detail["mirror_pairs_checked"] = rep.mirror_pairs_checked;
  r.detail["images_conjugate"] = rep.images_conjugate;
  r.detail["embedding_syllabic"] = rep.embedding_syllabic;
  r.detail["mirror_conjugate_by_t"] = rep.mirror_conjugate_by_t;
  r.detail["failures"] = rep.failures;
  r.status = rep.verdict ? "verified" : "refuted";
  return r;
}

struct ResolvedTask {
  const TaskDecl* decl = nullptr;
  const Tower* tower = nullptr;
  std::vector<PathWord> set;
};

ResolvedTask resolve_task(const Document& doc, const std::string& name,
                          const std::string& kind) {
  ResolvedTask out;
  for (const auto& d : doc.decls)
    if (d.kind == Declaration::Kind::Task && d.task->name == name) out.decl = &*d.task;
  if (!out.decl) throw Error("no task named " + name);
  if (out.decl->kind != kind)
    throw Error("task " + name + " is a " + out.decl->kind + " task, not " + kind);
  const Declaration* td = doc.find(Declaration::Kind::Tower, out.decl->tower);
  if (!td) throw Error("task " + name + " references unknown tower " + out.decl->tower);
  out.tower = &*td->tower;
  for (const auto& wname : out.decl->set) {
    const Declaration* wd = doc.find(Declaration::Kind::Word, wname);
    if (!wd) throw Error("task " + name + " references unknown word " + wname);
    Word w = remap_to(out.tower->top_pres().alpha, wd->word);
    out.set.push_back(word_to_path(out.tower->top(), out.tower->top_pres(), w));
  }
  return out;
}

TaskResult cmd_separate(const std::string& file, const std::string& name,
                        const std::optional<std::uint64_t>& seed_flag) {
  Document doc = parse(slurp(file));
  ResolvedTask rt = resolve_task(doc, name, "separate");
  TaskResult r;
  r.task = name;
  r.seed = pick_seed(seed_flag, rt.decl->seed);
  SeparationReport rep = separation_experiment(*rt.tower, rt.set, rt.decl->max);
  r.detail["tower"] = rt.decl->tower;
  r.detail["set"] = rt.decl->set;
  r.detail["n_scanned"] = rep.n_scanned;
  r.detail["minimal_n"] = rep.minimal_n ? ordered_json(*rep.minimal_n) : ordered_json(nullptr);
  ordered_json collapsed = ordered_json::array();
  for (const auto& [n, prs] : rep.collapsed) {
    ordered_json row;
    row["n"] = n;
    row["pairs"] = prs;
    collapsed.push_back(row);
  }
  r.detail["collapsed"] = collapsed;
  r.status = rep.minimal_n ? "verified" : "exhausted";
  return r;
}

TaskResult cmd_discriminate(const std::string& file, const std::string& name,
                            const std::optional<std::uint64_t>& seed_flag) {
  Document doc = parse(slurp(file));
  ResolvedTask rt = resolve_task(doc, name, "discriminate");
  TaskResult r;
  r.task = name;
  r.seed = pick_seed(seed_flag, rt.decl->seed);
  DiscriminationReport rep = discrimination_experiment(*rt.tower, rt.set, rt.decl->max);
  r.detail["tower"] = rt.decl->tower;
  r.detail["set"] = rt.decl->set;
  r.detail["n_scanned"] = rep.n_scanned;
  r.detail["minimal_n"] = rep.minimal_n ? ordered_json(*rep.minimal_n) : ordered_json(nullptr);
  ordered_json killed = ordered_json::array();
  for (const auto& [n, idx] : rep.killed) {
    ordered_json row;
    row["n"] = n;
    row["killed"] = idx;
    killed.push_back(row);
  }
  r.detail["killed"] = killed;
  r.status = rep.minimal_n ? "verified" : "exhausted";
  return r;
}

}  // namespace

ordered_json result_json(const TaskResult& r) {
  ordered_json j;
  j["task"] = r.task;
  j["status"] = r.status;
  j["seed"] = r.seed;
  j["timing_ms"] = r.timing_ms;
  j["detail"] = r.detail;
  return j;
}

std::string format_results(const std::vector<TaskResult>& results, const std::string& format) {
  std::ostringstream os;
  if (format == "json") {
    ordered_json arr = ordered_json::array();
    for (const auto& r : results) arr.push_back(result_json(r));
    os << arr.dump(2) << "\n";
  } else {
    for (const auto& r : results) {
      os << r.task << ": " << r.status << " (seed " << r.seed << ")\n";
      for (const auto& [key, value] : r.detail.items()) {
        os << "  " << key << ": ";
        if (value.is_string())
          os << value.get<std::string>();
        else
          os << value.dump();
        os << "\n";
      }
    }
  }
  return os.str();
}

int results_exit_code(const std::vector<TaskResult>& results) {
  int code = 0;
  for (const auto& r : results) {
    if (r.status == "error") return 2;
    if (r.status == "refuted" || r.status == "exhausted") code = 1;
  }
  return code;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"serrelab: free groups, graphs of groups, and tower experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "text";
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"json", "text"}));
  int jobs = 1;
  app.add_option("--jobs", jobs, "worker count (tasks still run in a deterministic order)")
      ->check(CLI::PositiveNumber);
  std::optional<std::uint64_t> seed_flag;
  app.add_option("--seed", seed_flag, "seed override (default: SERRELAB_SEED, then 0)");

  auto* check = app.add_subcommand("check", "parse and validate a file");
  std::string check_file;
  check->add_option("file", check_file, "document to validate")->required();

  auto* conj = app.add_subcommand("conj", "decide conjugacy of two words");
  std::string conj_file, conj_left, conj_right;
  bool conj_pm = false;
  conj->add_option("file", conj_file, "document providing the alphabet and words")->required();
  conj->add_option("--left", conj_left, "word name or expression")->required();
  conj->add_option("--right", conj_right, "word name or expression")->required();
  conj->add_flag("--pm", conj_pm, "allow conjugacy up to inversion");

  auto* verify = app.add_subcommand("verify", "run a built-in verification suite");
  verify->require_subcommand(1);
  auto* vmagnus = verify->add_subcommand("magnus-pair", "the magnus pair fixture");
  auto* vcdouble = verify->add_subcommand("c-double", "the double along w");
  std::string cd_w = "[x, y]";
  int cd_count = 100, cd_pairs = 8;
  vcdouble->add_option("--w", cd_w, "doubling word over F { x, y }");
  vcdouble->add_option("--count", cd_count, "family size")->check(CLI::PositiveNumber);
  vcdouble->add_option("--pairs", cd_pairs, "mirror pair count")->check(CLI::PositiveNumber);

  auto* separate = app.add_subcommand("separate", "run a declared separation task");
  std::string sep_file, sep_task;
  separate->add_option("file", sep_file, "document declaring the task")->required();
  separate->add_option("--task", sep_task, "task name")->required();

  auto* discriminate = app.add_subcommand("discriminate", "run a declared discrimination task");
  std::string dis_file, dis_task;
  discriminate->add_option("file", dis_file, "document declaring the task")->required();
  discriminate->add_option("--task", dis_task, "task name")->required();

  std::vector<std::string> argv_storage = args;
  std::vector<const char*> argv = {"serrelab"};
  for (const auto& a : argv_storage) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream usage;
    int code = CLI::App().exit(e, usage, usage);
    if (code == 0) {
      out << app.help();
      return 0;
    }
    err << e.get_name() << ": " << e.what() << "\n";
    return 2;
  }

  std::vector<TaskResult> results;
  auto run_one = [&](const std::string& task_name, auto&& fn) {
    try {
      results.push_back(fn());
    } catch (const ParseError& e) {
      results.push_back(error_result(task_name, seed_flag.value_or(0), e.what()));
    } catch (const Error& e) {
      results.push_back(error_result(task_name, seed_flag.value_or(0), e.what()));
    }
  };

  if (*check) run_one("check " + check_file, [&] { return cmd_check(check_file); });
  if (*conj)
    run_one("conj " + conj_file,
            [&] { return cmd_conj(conj_file, conj_left, conj_right, conj_pm); });
  if (*vmagnus)
    run_one("verify magnus-pair",
            [&] { return cmd_verify_magnus(pick_seed(seed_flag, std::nullopt)); });
  if (*vcdouble)
    run_one("verify c-double", [&] {
      return cmd_verify_cdouble(cd_w, cd_count, cd_pairs, pick_seed(seed_flag, std::nullopt));
    });
  if (*separate)
    run_one(sep_task, [&] { return cmd_separate(sep_file, sep_task, seed_flag); });
  if (*discriminate)
    run_one(dis_task, [&] { return cmd_discriminate(dis_file, dis_task, seed_flag); });

  out << format_results(results, format);
  return results_exit_code(results);
}

}  // namespace serrelab
