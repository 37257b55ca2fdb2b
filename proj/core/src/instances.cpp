// SPDX-License-Identifier: Apache-2.0

#include "dwcuts/instances.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "dwcuts/rng.hpp"

namespace dwcuts {

using nlohmann::json;

std::string to_string(Correlation c) {
  switch (c) {
    case Correlation::Uncorrelated:
      return "uncorrelated";
    case Correlation::Weak:
      return "weak";
    case Correlation::Strong:
      return "strong";
  }
  return "?";
}

Correlation correlation_from_string(const std::string& s) {
  if (s == "uncorrelated") return Correlation::Uncorrelated;
  if (s == "weak") return Correlation::Weak;
  if (s == "strong") return Correlation::Strong;
  throw ParseError("unknown correlation type: " + s);
}

MkapInstance generate_mkap(const MkapSizes& sizes, Correlation correlation, std::uint64_t seed) {
  if (sizes.num_classes <= 0 || sizes.num_knapsacks <= 0 || sizes.num_items <= 0)
    throw Error("generate_mkap: sizes must be positive");
  if (sizes.num_items % sizes.num_classes != 0)
    throw Error("generate_mkap: item count must be divisible by the class count");

  Rng rng(seed ^ 0x6d6b6170ULL);
  MkapInstance inst;
  inst.sizes = sizes;
  inst.correlation = correlation;
  inst.seed = seed;

  double total_weight = 0.0;
  for (int j = 0; j < sizes.num_items; ++j) {
    const double w = static_cast<double>(rng.uniform_int(10, 1000));
    inst.weights.push_back(w);
    total_weight += w;
    double p = 0.0;
    switch (correlation) {
      case Correlation::Uncorrelated:
        p = static_cast<double>(rng.uniform_int(10, 1000));
        break;
      case Correlation::Weak:
        p = std::max(1.0, static_cast<double>(rng.uniform_int(static_cast<long>(w) - 100,
                                                              static_cast<long>(w) + 100)));
        break;
      case Correlation::Strong:
        p = w + 100.0;
        break;
    }
    inst.profits.push_back(p);
  }

  const double base_capacity = 0.5 * total_weight / sizes.num_knapsacks;
  for (int i = 0; i < sizes.num_knapsacks; ++i) {
    const double factor = 0.9 + 0.2 * rng.uniform(0.0, 1.0);
    inst.capacities.push_back(std::max(1.0, std::round(base_capacity * factor)));
  }

  const int per_class = sizes.num_items / sizes.num_classes;
  inst.classes.resize(static_cast<std::size_t>(sizes.num_classes));
  for (int j = 0; j < sizes.num_items; ++j)
    inst.classes[static_cast<std::size_t>(j / per_class)].push_back(j);
  return inst;
}

BlockStructuredMip build_mkap_model(const MkapInstance& inst) {
  const int K = inst.sizes.num_classes;
  const int M = inst.sizes.num_knapsacks;
  const int N = inst.sizes.num_items;
  const int n = M * N + M * K;

  std::vector<double> objective(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < N; ++j)
      objective[static_cast<std::size_t>(i * N + j)] = -inst.profits[static_cast<std::size_t>(j)];

  BlockStructuredMip model =
      make_model(n, objective, std::vector<double>(static_cast<std::size_t>(n), 0.0),
                 std::vector<double>(static_cast<std::size_t>(n), 1.0),
                 std::vector<bool>(static_cast<std::size_t>(n), true));

  const auto x_of = [N](int i, int j) { return i * N + j; };
  const auto y_of = [M, N, K](int i, int k) { return M * N + i * K + k; };

  // Each item goes to at most one knapsack; each knapsack hosts at most one
  // class.
  for (int j = 0; j < N; ++j) {
    SparseRow row;
    row.sense = RowSense::LessEqual;
    row.rhs = 1.0;
    row.name = "item" + std::to_string(j);
    for (int i = 0; i < M; ++i) row.terms.emplace_back(x_of(i, j), 1.0);
    model.add_linking(row);
  }
  for (int i = 0; i < M; ++i) {
    SparseRow row;
    row.sense = RowSense::LessEqual;
    row.rhs = 1.0;
    row.name = "knap" + std::to_string(i);
    for (int k = 0; k < K; ++k) row.terms.emplace_back(y_of(i, k), 1.0);
    model.add_linking(row);
  }

  for (int i = 0; i < M; ++i) {
    for (int k = 0; k < K; ++k) {
      std::vector<int> support;
      for (int j : inst.classes[static_cast<std::size_t>(k)]) support.push_back(x_of(i, j));
      support.push_back(y_of(i, k));
      SparseRow row;
      row.sense = RowSense::LessEqual;
      row.rhs = 0.0;
      row.name = "cap" + std::to_string(i) + "_" + std::to_string(k);
      int local = 0;
      for (int j : inst.classes[static_cast<std::size_t>(k)])
        row.terms.emplace_back(local++, inst.weights[static_cast<std::size_t>(j)]);
      row.terms.emplace_back(local, -inst.capacities[static_cast<std::size_t>(i)]);
      model.add_block(std::move(support), {row});
    }
  }
  return model;
}

TkpInstance generate_tkp(int num_items, std::uint64_t seed) {
  if (num_items <= 0) throw Error("generate_tkp: item count must be positive");
  Rng rng(seed ^ 0x746b70ULL);
  TkpInstance inst;
  inst.num_items = num_items;
  const int horizon = std::max(4, num_items);
  const int max_len = std::max(2, horizon / 3);

  struct Item {
    int s, t;
    double w, p;
  };
  std::vector<Item> items;
  for (int i = 0; i < num_items; ++i) {
    Item it;
    it.s = static_cast<int>(rng.uniform_int(0, horizon - 2));
    it.t = std::min(horizon, it.s + static_cast<int>(rng.uniform_int(1, max_len)));
    it.w = static_cast<double>(rng.uniform_int(10, 100));
    it.p = static_cast<double>(rng.uniform_int(10, 100));
    items.push_back(it);
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    return a.s != b.s ? a.s < b.s : a.t < b.t;
  });
  for (const auto& it : items) {
    inst.start.push_back(it.s);
    inst.finish.push_back(it.t);
    inst.weights.push_back(it.w);
    inst.profits.push_back(it.p);
  }

  double peak = 0.0;
  for (int j = 0; j < num_items; ++j) {
    double active = 0.0;
    for (int i = 0; i < num_items; ++i)
      if (inst.start[static_cast<std::size_t>(i)] <= inst.start[static_cast<std::size_t>(j)] &&
          inst.finish[static_cast<std::size_t>(i)] > inst.start[static_cast<std::size_t>(j)])
        active += inst.weights[static_cast<std::size_t>(i)];
    peak = std::max(peak, active);
  }
  const double max_weight = *std::max_element(inst.weights.begin(), inst.weights.end());
  inst.capacity = std::max(max_weight, std::round(0.4 * peak));
  return inst;
}

std::vector<std::vector<int>> tkp_active_sets(const TkpInstance& inst) {
  std::vector<std::vector<int>> sets(static_cast<std::size_t>(inst.num_items));
  for (int j = 0; j < inst.num_items; ++j)
    for (int i = 0; i < inst.num_items; ++i)
      if (inst.start[static_cast<std::size_t>(i)] <= inst.start[static_cast<std::size_t>(j)] &&
          inst.finish[static_cast<std::size_t>(i)] > inst.start[static_cast<std::size_t>(j)])
        sets[static_cast<std::size_t>(j)].push_back(i);
  return sets;
}

BlockStructuredMip build_tkp_model(const TkpInstance& inst, int window) {
  if (window < 1) throw Error("build_tkp_model: window must be at least 1");
  const int n = inst.num_items;
  std::vector<double> objective;
  for (double p : inst.profits) objective.push_back(-p);
  BlockStructuredMip model =
      make_model(n, objective, std::vector<double>(static_cast<std::size_t>(n), 0.0),
                 std::vector<double>(static_cast<std::size_t>(n), 1.0),
                 std::vector<bool>(static_cast<std::size_t>(n), true));

  const auto sets = tkp_active_sets(inst);
  const int num_blocks = (n + window - 1) / window;
  for (int k = 0; k < num_blocks; ++k) {
    const int row_begin = k * window;
    const int row_end = std::min((k + 1) * window, n);
    std::vector<int> support;
    for (int j = row_begin; j < row_end; ++j)
      for (int i : sets[static_cast<std::size_t>(j)])
        if (std::find(support.begin(), support.end(), i) == support.end()) support.push_back(i);
    std::sort(support.begin(), support.end());

    std::vector<SparseRow> rows;
    for (int j = row_begin; j < row_end; ++j) {
      SparseRow row;
      row.sense = RowSense::LessEqual;
      row.rhs = inst.capacity;
      row.name = "time" + std::to_string(j);
      for (int i : sets[static_cast<std::size_t>(j)]) {
        const auto local = static_cast<int>(
            std::find(support.begin(), support.end(), i) - support.begin());
        row.terms.emplace_back(local, inst.weights[static_cast<std::size_t>(i)]);
      }
      rows.push_back(row);
    }
    model.add_block(std::move(support), rows);
  }
  return model;
}

namespace {

json bound_to_json(double v) {
  if (v == kInfinity || v == -kInfinity) return nullptr;
  return v;
}

double bound_from_json(const json& j, double sign) {
  if (j.is_null()) return sign * kInfinity;
  return j.get<double>();
}

json row_to_json(const SparseRow& row) {
  json terms = json::array();
  for (const auto& [idx, coef] : row.terms) terms.push_back({idx, coef});
  const char* sense = row.sense == RowSense::GreaterEqual ? ">="
                      : row.sense == RowSense::LessEqual  ? "<="
                                                          : "=";
  return json{{"terms", terms}, {"sense", sense}, {"rhs", row.rhs}, {"name", row.name}};
}

SparseRow row_from_json(const json& j) {
  SparseRow row;
  for (const auto& t : j.at("terms")) row.terms.emplace_back(t.at(0).get<int>(), t.at(1).get<double>());
  const std::string sense = j.at("sense").get<std::string>();
  row.sense = sense == ">=" ? RowSense::GreaterEqual
              : sense == "<=" ? RowSense::LessEqual
                              : RowSense::Equal;
  row.rhs = j.at("rhs").get<double>();
  row.name = j.value("name", "");
  return row;
}

json model_to_json(const BlockStructuredMip& m) {
  json blocks = json::array();
  for (const auto& block : m.blocks) {
    json rows = json::array();
    for (const auto& row : block.rows) rows.push_back(row_to_json(row));
    blocks.push_back({{"support", block.support}, {"rows", rows}});
  }
  json linking = json::array();
  for (const auto& row : m.linking) linking.push_back(row_to_json(row));
  json lower = json::array(), upper = json::array();
  for (double v : m.lower) lower.push_back(bound_to_json(v));
  for (double v : m.upper) upper.push_back(bound_to_json(v));
  return json{{"n", m.n},          {"objective", m.objective}, {"lower", lower},
              {"upper", upper},    {"integrality", m.integrality}, {"linking", linking},
              {"blocks", blocks}};
}

BlockStructuredMip model_from_json(const json& j) {
  BlockStructuredMip m;
  m.n = j.at("n").get<int>();
  m.objective = j.at("objective").get<std::vector<double>>();
  for (const auto& b : j.at("lower")) m.lower.push_back(bound_from_json(b, -1.0));
  for (const auto& b : j.at("upper")) m.upper.push_back(bound_from_json(b, 1.0));
  m.integrality = j.at("integrality").get<std::vector<bool>>();
  for (const auto& r : j.at("linking")) m.add_linking(row_from_json(r));
  for (const auto& b : j.at("blocks")) {
    std::vector<SparseRow> rows;
    for (const auto& r : b.at("rows")) rows.push_back(row_from_json(r));
    m.add_block(b.at("support").get<std::vector<int>>(), rows);
  }
  return m;
}

constexpr int kSchemaVersion = 1;

}  // namespace

void write_instance(const InstancePayload& payload, const std::string& path) {
  json j;
  j["version"] = kSchemaVersion;
  if (const auto* mkap = std::get_if<MkapInstance>(&payload)) {
    j["kind"] = "mkap";
    j["data"] = {{"classes", mkap->sizes.num_classes},
                 {"knapsacks", mkap->sizes.num_knapsacks},
                 {"items", mkap->sizes.num_items},
                 {"profits", mkap->profits},
                 {"weights", mkap->weights},
                 {"capacities", mkap->capacities},
                 {"class_members", mkap->classes},
                 {"correlation", to_string(mkap->correlation)},
                 {"seed", mkap->seed}};
  } else if (const auto* tkp = std::get_if<TkpInstance>(&payload)) {
    j["kind"] = "tkp";
    j["data"] = {{"items", tkp->num_items},   {"profits", tkp->profits},
                 {"weights", tkp->weights},   {"start", tkp->start},
                 {"finish", tkp->finish},     {"capacity", tkp->capacity},
                 {"window", tkp->default_window}};
  } else {
    j["kind"] = "generic";
    j["data"] = model_to_json(std::get<BlockStructuredMip>(payload));
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << '\n';
}

InstancePayload read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("malformed JSON in " + path + ": " + e.what());
  }
  try {
    const int version = j.at("version").get<int>();
    if (version != kSchemaVersion)
      throw ParseError("unsupported schema version " + std::to_string(version) + " in " + path);
    const std::string kind = j.at("kind").get<std::string>();
    const json& data = j.at("data");
    if (kind == "mkap") {
      MkapInstance inst;
      inst.sizes.num_classes = data.at("classes").get<int>();
      inst.sizes.num_knapsacks = data.at("knapsacks").get<int>();
      inst.sizes.num_items = data.at("items").get<int>();
      inst.profits = data.at("profits").get<std::vector<double>>();
      inst.weights = data.at("weights").get<std::vector<double>>();
      inst.capacities = data.at("capacities").get<std::vector<double>>();
      inst.classes = data.at("class_members").get<std::vector<std::vector<int>>>();
      inst.correlation = correlation_from_string(data.at("correlation").get<std::string>());
      inst.seed = data.at("seed").get<std::uint64_t>();
      return inst;
    }
    if (kind == "tkp") {
      TkpInstance inst;
      inst.num_items = data.at("items").get<int>();
      inst.profits = data.at("profits").get<std::vector<double>>();
      inst.weights = data.at("weights").get<std::vector<double>>();
      inst.start = data.at("start").get<std::vector<int>>();
      inst.finish = data.at("finish").get<std::vector<int>>();
      inst.capacity = data.at("capacity").get<double>();
      inst.default_window = data.value("window", 3);
      return inst;
    }
    if (kind == "generic") return model_from_json(data);
    throw ParseError("unknown instance kind '" + kind + "' in " + path);
  } catch (const json::exception& e) {
    throw ParseError("schema error in " + path + ": " + e.what());
  }
}

BlockStructuredMip model_of(const InstancePayload& payload, int window) {
  if (const auto* mkap = std::get_if<MkapInstance>(&payload)) return build_mkap_model(*mkap);
  if (const auto* tkp = std::get_if<TkpInstance>(&payload))
    return build_tkp_model(*tkp, window > 0 ? window : tkp->default_window);
  return std::get<BlockStructuredMip>(payload);
}

void write_cuts_json(const std::vector<Cut>& cuts, const std::string& path) {
  json arr = json::array();
  for (const auto& cut : cuts) {
    json terms = json::array();
    for (const auto& [idx, coef] : cut.coeffs) terms.push_back({idx, coef});
    json entry{{"id", cut.id},
               {"parent", cut.parent},
               {"origin", to_string(cut.origin)},
               {"tilt_depth", cut.tilt_depth},
               {"rhs", cut.rhs},
               {"coeffs", terms},
               {"zero", cut.zero}};
    if (cut.block)
      entry["block"] = *cut.block;
    else
      entry["block"] = nullptr;
    arr.push_back(std::move(entry));
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << json{{"version", kSchemaVersion}, {"cuts", arr}}.dump(2) << '\n';
}

std::vector<Cut> read_cuts_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json j;
  try {
    in >> j;
    std::vector<Cut> cuts;
    for (const auto& entry : j.at("cuts")) {
      Cut cut;
      cut.id = entry.at("id").get<int>();
      cut.parent = entry.at("parent").get<int>();
      const std::string origin = entry.at("origin").get<std::string>();
      cut.origin = origin == "objective"     ? CutOrigin::Objective
                   : origin == "strengthened" ? CutOrigin::Strengthened
                   : origin == "tilted"       ? CutOrigin::Tilted
                                              : CutOrigin::Dwb;
      cut.tilt_depth = entry.at("tilt_depth").get<int>();
      cut.rhs = entry.at("rhs").get<double>();
      for (const auto& t : entry.at("coeffs"))
        cut.coeffs.emplace_back(t.at(0).get<int>(), t.at(1).get<double>());
      cut.zero = entry.at("zero").get<bool>();
      if (!entry.at("block").is_null()) cut.block = entry.at("block").get<int>();
      cuts.push_back(std::move(cut));
    }
    return cuts;
  } catch (const json::exception& e) {
    throw ParseError("schema error in " + path + ": " + e.what());
  }
}

namespace {

std::string format_number(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

void write_terms(std::ofstream& out, const std::vector<std::pair<int, double>>& terms) {
  bool first = true;
  for (const auto& [idx, coef] : terms) {
    if (coef == 0.0) continue;
    if (first) {
      out << (coef < 0.0 ? "- " : "");
      first = false;
    } else {
      out << (coef < 0.0 ? " - " : " + ");
    }
    out << format_number(std::abs(coef)) << " x" << idx;
  }
  if (first) out << "0 x0";
}

const char* sense_text(RowSense sense) {
  switch (sense) {
    case RowSense::GreaterEqual:
      return ">=";
    case RowSense::LessEqual:
      return "<=";
    case RowSense::Equal:
      return "=";
  }
  return ">=";
}

}  // namespace

void export_lp_file(const BlockStructuredMip& model, const std::vector<Cut>& cuts,
                    const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);

  out << "Minimize\n obj: ";
  std::vector<std::pair<int, double>> objective;
  for (int i = 0; i < model.n; ++i)
    if (model.objective[static_cast<std::size_t>(i)] != 0.0)
      objective.emplace_back(i, model.objective[static_cast<std::size_t>(i)]);
  write_terms(out, objective);
  out << "\nSubject To\n";

  for (std::size_t r = 0; r < model.linking.size(); ++r) {
    out << " l" << r << ": ";
    write_terms(out, model.linking[r].terms);
    out << ' ' << sense_text(model.linking[r].sense) << ' ' << format_number(model.linking[r].rhs)
        << '\n';
  }
  for (int j = 0; j < model.num_blocks(); ++j) {
    const Block& block = model.blocks[static_cast<std::size_t>(j)];
    for (std::size_t r = 0; r < block.rows.size(); ++r) {
      std::vector<std::pair<int, double>> mapped;
      for (const auto& [local, coef] : block.rows[r].terms)
        mapped.emplace_back(block.support[static_cast<std::size_t>(local)], coef);
      out << " b" << j << "_" << r << ": ";
      write_terms(out, mapped);
      out << ' ' << sense_text(block.rows[r].sense) << ' ' << format_number(block.rows[r].rhs)
          << '\n';
    }
  }
  int cut_index = 0;
  for (const auto& cut : cuts) {
    if (cut.zero) continue;
    out << " c" << cut_index++ << ": ";
    write_terms(out, cut.coeffs);
    out << " >= " << format_number(cut.rhs) << '\n';
  }

  out << "Bounds\n";
  for (int i = 0; i < model.n; ++i) {
    const double lo = model.lower[static_cast<std::size_t>(i)];
    const double hi = model.upper[static_cast<std::size_t>(i)];
    if (!std::isfinite(lo) && !std::isfinite(hi)) {
      out << " x" << i << " free\n";
    } else if (!std::isfinite(lo)) {
      out << " x" << i << " <= " << format_number(hi) << '\n';
    } else if (!std::isfinite(hi)) {
      out << " x" << i << " >= " << format_number(lo) << '\n';
    } else {
      out << ' ' << format_number(lo) << " <= x" << i << " <= " << format_number(hi) << '\n';
    }
  }

  std::vector<int> binaries, generals;
  for (int i = 0; i < model.n; ++i) {
    if (!model.integrality[static_cast<std::size_t>(i)]) continue;
    const bool binary = model.lower[static_cast<std::size_t>(i)] == 0.0 &&
                        model.upper[static_cast<std::size_t>(i)] == 1.0;
    (binary ? binaries : generals).push_back(i);
  }
  if (!binaries.empty()) {
    out << "Binaries\n";
    for (int i : binaries) out << " x" << i << '\n';
  }
  if (!generals.empty()) {
    out << "Generals\n";
    for (int i : generals) out << " x" << i << '\n';
  }
  out << "End\n";
}

}  // namespace dwcuts
