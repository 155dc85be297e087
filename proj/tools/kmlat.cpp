// kmlat: exact centers and parabolic covering kernels for generalized
// Cartan matrices. See README.md for the file formats and JSON schemas.

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kmlat/kmlat.hpp"

using json = nlohmann::json;
using namespace kmlat;

namespace {

// Exit codes: 0 ok, 2 domain rejection, 3 parse error, 4 internal
// consistency failure (dual-route disagreement; must never happen).
constexpr int kExitOk = 0;
constexpr int kExitDomain = 2;
constexpr int kExitParse = 3;
constexpr int kExitInternal = 4;

struct parse_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MatrixDocument {
  IntMatrix rows;
  std::vector<std::string> labels;  // empty means default "1".."n"
};

Int int_from_json(const json& v) {
  if (v.is_number_integer()) return Int(std::to_string(v.get<long long>()));
  if (v.is_string()) {
    try {
      return Int(v.get<std::string>());
    } catch (const std::invalid_argument&) {
      throw parse_failure("entry is not an integer: " + v.dump());
    }
  }
  throw parse_failure("matrix entries must be integers or integer strings");
}

MatrixDocument parse_json_document(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw parse_failure(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("rows") || !doc["rows"].is_array())
    throw parse_failure("expected an object with a \"rows\" array");
  const json& rows = doc["rows"];
  const int n = static_cast<int>(rows.size());
  MatrixDocument m;
  m.rows = IntMatrix(n, n);
  for (int i = 0; i < n; ++i) {
    if (!rows[static_cast<size_t>(i)].is_array() ||
        static_cast<int>(rows[static_cast<size_t>(i)].size()) != n)
      throw parse_failure("matrix document must be square");
    for (int j = 0; j < n; ++j)
      m.rows(i, j) = int_from_json(rows[static_cast<size_t>(i)][static_cast<size_t>(j)]);
  }
  if (doc.contains("labels")) {
    if (!doc["labels"].is_array() ||
        static_cast<int>(doc["labels"].size()) != n)
      throw parse_failure("labels must be an array of length n");
    for (const auto& l : doc["labels"]) {
      if (!l.is_string()) throw parse_failure("labels must be strings");
      m.labels.push_back(l.get<std::string>());
    }
    for (size_t i = 0; i < m.labels.size(); ++i)
      for (size_t j = i + 1; j < m.labels.size(); ++j)
        if (m.labels[i] == m.labels[j])
          throw parse_failure("duplicate label: '" + m.labels[i] + "'");
  }
  return m;
}

MatrixDocument parse_grid_document(const std::string& text) {
  std::vector<std::vector<Int>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::istringstream toks(line);
    std::vector<Int> row;
    std::string tok;
    while (toks >> tok) {
      size_t k = (tok[0] == '-') ? 1 : 0;
      if (k == tok.size() ||
          tok.find_first_not_of("0123456789", k) != std::string::npos)
        throw parse_failure("not an integer token: '" + tok + "'");
      row.emplace_back(tok);
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw parse_failure("empty matrix document");
  for (const auto& r : rows)
    if (r.size() != rows.size())
      throw parse_failure("matrix document must be square");
  MatrixDocument m;
  m.rows = IntMatrix::from_rows(rows);
  return m;
}

MatrixDocument load_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_failure("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  size_t k = text.find_first_not_of(" \t\r\n");
  if (k == std::string::npos) throw parse_failure("empty matrix document");
  if (text[k] == '{') return parse_json_document(text);
  return parse_grid_document(text);
}

CartanMatrix load_cartan(const std::string& path) {
  MatrixDocument doc = load_document(path);
  return CartanMatrix(std::move(doc.rows), std::move(doc.labels));
}

/// FNV-1a over a canonical serialization; stable across runs and platforms.
std::string document_digest(const CartanMatrix& A) {
  std::ostringstream os;
  os << "v" << kMatrixFormatVersion << "|" << A.size() << "|";
  for (int i = 0; i < A.size(); ++i)
    for (int j = 0; j < A.size(); ++j) os << A.entry(i, j) << ";";
  os << "|";
  for (const auto& l : A.labels()) os << l << ";";
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : os.str()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream hex;
  hex << std::hex;
  hex.width(16);
  hex.fill('0');
  hex << h;
  return hex.str();
}

json json_int(const Int& v) {
  if (v.fits_slong_p()) return json(v.get_si());
  return json(v.get_str());
}

json to_json(const FiniteAbelianGroup& g) {
  json factors = json::array();
  for (const Int& f : g.invariant_factors()) factors.push_back(json_int(f));
  return json{{"invariant_factors", factors}};
}

json to_json(const CenterStructure& c) {
  return json{{"finite_part", to_json(c.finite_part)},
              {"torus_rank", c.torus_rank}};
}

json labels_json(const CartanMatrix& A, const IndexSubset& I) {
  json out = json::array();
  for (int i : I.members()) out.push_back(A.label(i));
  return out;
}

json components_json(const CartanMatrix& A, const CartanType& t) {
  json comps = json::array();
  for (const auto& [c, kind] : t.per_component) {
    json entry{{"indices", labels_json(A, c)}, {"kind", to_string(kind)}};
    if (kind == CartanKind::Finite)
      entry["family"] =
          finite_family_name(A.matrix().submatrix(c.members(), c.members()));
    comps.push_back(std::move(entry));
  }
  return comps;
}

json to_json(const CartanMatrix& A, const ParabolicReport& r) {
  json out{{"subset", labels_json(A, r.subset)},
           {"det", json_int(r.det_AI)},
           {"structure", to_string(r.structure)},
           {"parabolic_center", to_json(r.parabolic_center)},
           {"torus_factor_rank", r.torus_factor_rank}};
  if (r.gamma) out["gamma"] = to_json(*r.gamma);
  json levi = json::array();
  for (const auto& lc : r.levi_components) {
    json entry{{"indices", labels_json(A, lc.indices)},
               {"kind", to_string(lc.kind)}};
    if (lc.family) entry["family"] = *lc.family;
    levi.push_back(std::move(entry));
  }
  out["levi_components"] = std::move(levi);
  return out;
}

json document_json(const CartanMatrix& A) {
  json rows = json::array();
  for (int i = 0; i < A.size(); ++i) {
    json row = json::array();
    for (int j = 0; j < A.size(); ++j) row.push_back(json_int(A.entry(i, j)));
    rows.push_back(std::move(row));
  }
  return json{{"rows", rows}, {"labels", A.labels()}};
}

std::string subset_display(const CartanMatrix& A, const IndexSubset& I) {
  std::string s = "{";
  bool first = true;
  for (int i : I.members()) {
    if (!first) s += ",";
    s += A.label(i);
    first = false;
  }
  return s + "}";
}

IndexSubset parse_subset(const CartanMatrix& A, const std::string& spec) {
  std::vector<int> members;
  std::istringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    size_t b = tok.find_first_not_of(" \t");
    size_t e = tok.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    std::string label = tok.substr(b, e - b + 1);
    auto idx = A.index_of_label(label);
    if (!idx) throw subset_error("unknown index label: '" + label + "'");
    members.push_back(*idx);
  }
  return IndexSubset(std::move(members));
}

void print_center(std::ostream& os, const CenterStructure& c) {
  os << "finite part: " << c.finite_part.to_string()
     << "; torus rank: " << c.torus_rank << "\n";
}

void print_report(std::ostream& os, const CartanMatrix& A,
                  const ParabolicReport& r) {
  os << "subset " << subset_display(A, r.subset) << ": det A_I = " << r.det_AI
     << ", " << to_string(r.structure) << "\n";
  if (r.gamma) os << "  gamma: " << r.gamma->to_string() << "\n";
  for (const auto& lc : r.levi_components) {
    os << "  levi component " << subset_display(A, lc.indices) << ": "
       << to_string(lc.kind);
    if (lc.family) os << " " << *lc.family;
    os << "\n";
  }
  os << "  parabolic center: ";
  print_center(os, r.parabolic_center);
  os << "  torus factor rank: " << r.torus_factor_rank << "\n";
}

int default_jobs() {
  if (const char* env = std::getenv("KMLAT_JOBS")) {
    int j = std::atoi(env);
    if (j >= 1) return j;
  }
  return 1;
}

int cmd_validate(const std::string& path) {
  CartanMatrix A = load_cartan(path);
  std::cout << "valid Cartan matrix (n = " << A.size() << ")\n";
  return kExitOk;
}

int cmd_classify(const std::string& path, bool as_json) {
  CartanMatrix A = load_cartan(path);
  CartanType t = classify(A);
  if (as_json) {
    std::cout << json{{"overall", to_string(t.overall)},
                      {"components", components_json(A, t)}}
                     .dump()
              << "\n";
    return kExitOk;
  }
  std::cout << "type: " << to_string(t.overall) << "\n";
  for (const auto& [c, kind] : t.per_component) {
    std::cout << "  component " << subset_display(A, c) << ": "
              << to_string(kind);
    if (kind == CartanKind::Finite)
      std::cout << " "
                << finite_family_name(
                       A.matrix().submatrix(c.members(), c.members()));
    std::cout << "\n";
  }
  return kExitOk;
}

int cmd_center(const std::string& path, bool as_json, bool with_generators) {
  CartanMatrix A = load_cartan(path);
  CenterStructure c = center_structure(A);
  std::optional<CenterGenerators> gens;
  if (with_generators) gens = center_generators(A);  // singular -> domain error
  if (as_json) {
    json out = to_json(c);
    if (gens) {
      json glist = json::array();
      for (const auto& g : gens->generators) {
        json coords = json::array();
        for (const Rat& x : g.coords) coords.push_back(x.get_str());
        glist.push_back(json{{"coords", coords}, {"order", json_int(g.order)}});
      }
      out["generators"] = std::move(glist);
    }
    std::cout << out.dump() << "\n";
    return kExitOk;
  }
  print_center(std::cout, c);
  if (gens) {
    int i = 0;
    for (const auto& g : gens->generators) {
      std::cout << "  v" << ++i << " = (";
      for (size_t j = 0; j < g.coords.size(); ++j)
        std::cout << (j ? ", " : "") << g.coords[j];
      std::cout << "), order " << g.order << "\n";
    }
  }
  return kExitOk;
}

int cmd_parabolic(const std::string& path, const std::string& subset_spec,
                  bool as_json, bool fast) {
  CartanMatrix A = load_cartan(path);
  IndexSubset I = parse_subset(A, subset_spec);
  ParabolicReport r =
      parabolic_report(A, I, fast ? GammaMode::Fast : GammaMode::Checked);
  if (as_json)
    std::cout << to_json(A, r).dump() << "\n";
  else
    print_report(std::cout, A, r);
  return kExitOk;
}

int cmd_enumerate(const std::string& path, const std::string& out_path,
                  int jobs, bool fast, bool force, int limit) {
  CartanMatrix A = load_cartan(path);
  EnumerateOptions opts;
  opts.jobs = jobs;
  opts.mode = fast ? GammaMode::Fast : GammaMode::Checked;
  opts.rank_limit = limit;
  opts.force = force;

  std::ofstream file;
  bool to_file = !out_path.empty();
  if (to_file) {
    file.open(out_path, std::ios::app);  // catalog files are append-only
    if (!file) throw error("cannot open output file: " + out_path);
  }
  std::ostream& records = to_file ? static_cast<std::ostream&>(file) : std::cout;
  std::ostream& summary = to_file ? std::cout : std::cerr;

  const std::string digest = document_digest(A);
  const json version{{"tool", kToolVersion},
                     {"catalog_format", kCatalogFormatVersion}};
  long total = 0, split = 0;
  enumerate_reports(A, opts, [&](const ParabolicReport& r) {
    json rec{{"digest", digest},
             {"subset", labels_json(A, r.subset)},
             {"report", to_json(A, r)},
             {"version", version}};
    records << rec.dump() << "\n";
    ++total;
    if (r.structure == ParabolicStructure::Split) ++split;
  });
  summary << "enumerated " << total << " proper subsets: " << split
          << " split, " << (total - split) << " semidirect\n";
  return kExitOk;
}

int cmd_generate(const std::string& family, int rank) {
  CartanMatrix A = builtin(family, rank);
  std::cout << document_json(A).dump() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact centers and parabolic covering kernels of Kac-Moody "
               "groups, from generalized Cartan matrices"};
  app.set_version_flag(
      "--version",
      std::string("kmlat ") + kToolVersion + " (matrix-doc v" +
          std::to_string(kMatrixFormatVersion) + ", catalog v" +
          std::to_string(kCatalogFormatVersion) + ")");
  app.require_subcommand(1);

  std::string path, subset_spec, out_path, family;
  bool as_json = false, fast = false, force = false, with_generators = false;
  int jobs = default_jobs();
  int rank_arg = 0;
  int limit = 20;

  CLI::App* validate = app.add_subcommand("validate", "check the Cartan matrix conditions");
  validate->add_option("file", path, "matrix document")->required();

  CLI::App* classify_cmd = app.add_subcommand("classify", "finite / affine / indefinite type, per component");
  classify_cmd->add_option("file", path, "matrix document")->required();
  classify_cmd->add_flag("--json", as_json, "machine-readable output");

  CLI::App* center_cmd = app.add_subcommand("center", "center of the full Kac-Moody group");
  center_cmd->add_option("file", path, "matrix document")->required();
  center_cmd->add_flag("--json", as_json, "machine-readable output");
  center_cmd->add_flag("--generators", with_generators,
                       "also list generators (needs det A != 0)");

  CLI::App* parabolic_cmd = app.add_subcommand("parabolic", "report for one proper subset I");
  parabolic_cmd->add_option("file", path, "matrix document")->required();
  parabolic_cmd->add_option("--subset", subset_spec, "comma-separated index labels, e.g. 1,2")
      ->required();
  parabolic_cmd->add_flag("--json", as_json, "machine-readable output");
  parabolic_cmd->add_flag("--fast", fast, "skip the dual-route cross-check");

  CLI::App* enumerate_cmd = app.add_subcommand("enumerate", "reports for every proper subset, as JSONL records");
  enumerate_cmd->add_option("file", path, "matrix document")->required();
  enumerate_cmd->add_option("--out", out_path, "append records to this file (default: stdout)");
  enumerate_cmd->add_option("--jobs", jobs, "worker threads (default: KMLAT_JOBS or 1)");
  enumerate_cmd->add_flag("--fast", fast, "skip the dual-route cross-check");
  enumerate_cmd->add_flag("--force", force, "override the rank limit");
  enumerate_cmd->add_option("--limit", limit, "rank limit without --force (default 20)");

  CLI::App* generate_cmd = app.add_subcommand("generate", "print a built-in family matrix document");
  generate_cmd->add_option("--family", family, "finite-a or affine-a")->required();
  generate_cmd->add_option("--rank", rank_arg, "family rank")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (validate->parsed()) return cmd_validate(path);
    if (classify_cmd->parsed()) return cmd_classify(path, as_json);
    if (center_cmd->parsed()) return cmd_center(path, as_json, with_generators);
    if (parabolic_cmd->parsed())
      return cmd_parabolic(path, subset_spec, as_json, fast);
    if (enumerate_cmd->parsed())
      return cmd_enumerate(path, out_path, jobs, fast, force, limit);
    if (generate_cmd->parsed()) return cmd_generate(family, rank_arg);
  } catch (const parse_failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const consistency_error& e) {
    std::cerr << "internal consistency failure: " << e.what() << "\n";
    return kExitInternal;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitOk;
}
