#include "grade/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace grade {

namespace {

[[noreturn]] void parse_fail(const std::string& path, int line_no, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

std::string strip(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::ifstream open_or_fail(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

long long parse_int(const std::string& tok, const std::string& path, int line_no) {
  size_t pos = 0;
  long long v;
  try {
    v = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    parse_fail(path, line_no, "expected integer, got '" + tok + "'");
  }
  if (pos != tok.size()) parse_fail(path, line_no, "trailing characters in integer '" + tok + "'");
  return v;
}

double parse_double(const std::string& tok, const std::string& path, int line_no) {
  size_t pos = 0;
  double v;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    parse_fail(path, line_no, "expected number, got '" + tok + "'");
  }
  if (pos != tok.size()) parse_fail(path, line_no, "trailing characters in number '" + tok + "'");
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(strip(tok));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace

Graph load_graph_csv(const std::string& edge_path,
                     const std::optional<std::string>& feature_path,
                     const std::optional<std::string>& label_path,
                     LabelMode label_mode, int fallback_max_degree) {
  std::ifstream in = open_or_fail(edge_path);

  std::optional<int> declared_nodes;
  std::vector<std::pair<int, int>> edges;
  int max_index = -1;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string s = strip(line);
    if (s.empty()) continue;
    if (s.rfind("#nodes=", 0) == 0) {
      if (line_no != 1) parse_fail(edge_path, line_no, "#nodes= header only allowed on first line");
      declared_nodes = static_cast<int>(parse_int(s.substr(7), edge_path, line_no));
      if (*declared_nodes < 0) parse_fail(edge_path, line_no, "negative node count");
      continue;
    }
    auto toks = split_csv(s);
    if (toks.size() != 2) parse_fail(edge_path, line_no, "expected 'src,dst'");
    int u = static_cast<int>(parse_int(toks[0], edge_path, line_no));
    int v = static_cast<int>(parse_int(toks[1], edge_path, line_no));
    if (u < 0 || v < 0) parse_fail(edge_path, line_no, "negative node index");
    edges.emplace_back(u, v);
    max_index = std::max(max_index, std::max(u, v));
  }

  const int num_nodes = declared_nodes ? *declared_nodes : max_index + 1;
  if (declared_nodes && max_index >= *declared_nodes)
    throw std::runtime_error(edge_path + ": edge index " + std::to_string(max_index) +
                             " exceeds declared node count " + std::to_string(*declared_nodes));

  Eigen::MatrixXd features;
  if (feature_path) {
    std::ifstream fin = open_or_fail(*feature_path);
    std::vector<std::vector<double>> rows;
    int fline = 0;
    while (std::getline(fin, line)) {
      ++fline;
      std::string s = strip(line);
      if (s.empty()) continue;
      auto toks = split_csv(s);
      std::vector<double> row;
      row.reserve(toks.size());
      for (const auto& t : toks) row.push_back(parse_double(t, *feature_path, fline));
      if (!rows.empty() && row.size() != rows.front().size())
        parse_fail(*feature_path, fline,
                   "row width " + std::to_string(row.size()) + " does not match first row width " +
                       std::to_string(rows.front().size()));
      rows.push_back(std::move(row));
    }
    if (static_cast<int>(rows.size()) != num_nodes)
      throw std::runtime_error(*feature_path + ": " + std::to_string(rows.size()) +
                               " feature rows for " + std::to_string(num_nodes) + " nodes");
    features.resize(num_nodes, rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
    for (int i = 0; i < num_nodes; ++i)
      for (int j = 0; j < features.cols(); ++j) features(i, j) = rows[i][j];
  }

  std::optional<Eigen::VectorXi> labels;
  std::optional<Eigen::VectorXd> targets;
  if (label_path && label_mode != LabelMode::None) {
    std::ifstream lin = open_or_fail(*label_path);
    std::vector<std::string> toks;
    int lline = 0;
    std::vector<int> tok_lines;
    while (std::getline(lin, line)) {
      ++lline;
      std::string s = strip(line);
      if (s.empty()) continue;
      toks.push_back(s);
      tok_lines.push_back(lline);
    }
    if (static_cast<int>(toks.size()) != num_nodes)
      throw std::runtime_error(*label_path + ": " + std::to_string(toks.size()) +
                               " labels for " + std::to_string(num_nodes) + " nodes");
    if (label_mode == LabelMode::ClassIndex) {
      Eigen::VectorXi y(num_nodes);
      for (int i = 0; i < num_nodes; ++i) {
        long long c = parse_int(toks[i], *label_path, tok_lines[i]);
        if (c < 0) parse_fail(*label_path, tok_lines[i], "negative class index");
        y(i) = static_cast<int>(c);
      }
      labels = y;
    } else {
      Eigen::VectorXd y(num_nodes);
      for (int i = 0; i < num_nodes; ++i) y(i) = parse_double(toks[i], *label_path, tok_lines[i]);
      targets = y;
    }
  }

  Graph g = build_graph(num_nodes, edges, features, labels);
  g.targets = targets;
  if (!feature_path) g.features = degree_one_hot(g, fallback_max_degree);
  return g;
}

void save_edges_csv(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "#nodes=" << g.num_nodes << "\n";
  for (const auto& [u, v] : g.edges) out << u << "," << v << "\n";
}

void save_features_csv(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  char buf[64];
  for (int i = 0; i < g.num_nodes; ++i) {
    for (int j = 0; j < g.features.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", g.features(i, j));
      out << (j ? "," : "") << buf;
    }
    out << "\n";
  }
}

void save_labels(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (g.labels) {
    for (int i = 0; i < g.num_nodes; ++i) out << (*g.labels)(i) << "\n";
  } else if (g.targets) {
    char buf[64];
    for (int i = 0; i < g.num_nodes; ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", (*g.targets)(i));
      out << buf << "\n";
    }
  } else {
    throw std::runtime_error("save_labels: graph has no labels or targets");
  }
}

InteractionData load_interactions_csv(const std::string& path) {
  std::ifstream in = open_or_fail(path);

  std::vector<std::pair<long long, long long>> raw;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string s = strip(line);
    if (s.empty()) continue;
    auto toks = split_csv(s);
    if (toks.size() != 2) parse_fail(path, line_no, "expected 'user_id,item_id'");
    long long u = parse_int(toks[0], path, line_no);
    long long i = parse_int(toks[1], path, line_no);
    if (u < 0 || i < 0) parse_fail(path, line_no, "negative id");
    raw.emplace_back(u, i);
  }
  if (raw.empty()) throw std::runtime_error(path + ": no interactions");

  std::set<long long> users, items;
  for (const auto& [u, i] : raw) {
    users.insert(u);
    items.insert(i);
  }

  InteractionData data;
  data.user_ids.assign(users.begin(), users.end());
  data.item_ids.assign(items.begin(), items.end());
  data.num_users = static_cast<int>(data.user_ids.size());
  data.num_items = static_cast<int>(data.item_ids.size());

  std::map<long long, int> user_index, item_index;
  for (int k = 0; k < data.num_users; ++k) user_index[data.user_ids[k]] = k;
  for (int k = 0; k < data.num_items; ++k) item_index[data.item_ids[k]] = k;

  std::set<std::pair<int, int>> seen;
  for (const auto& [u, i] : raw) {
    std::pair<int, int> p{user_index[u], item_index[i]};
    if (seen.insert(p).second) data.interactions.push_back(p);
  }
  return data;
}

std::vector<std::string> load_token_lines(const std::string& path) {
  std::ifstream in = open_or_fail(path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    std::string s = strip(line);
    if (!s.empty()) out.push_back(std::move(s));
  }
  return out;
}

Graph bipartite_graph(const InteractionData& data, int max_degree) {
  const int n = data.num_users + data.num_items;
  std::vector<std::pair<int, int>> edges;
  edges.reserve(data.interactions.size());
  for (const auto& [u, i] : data.interactions)
    edges.emplace_back(u, data.num_users + i);

  Graph g = build_graph(n, edges);
  g.features = degree_one_hot(g, max_degree);
  g.roles.assign(n, NodeRole::Item);
  for (int u = 0; u < data.num_users; ++u) g.roles[u] = NodeRole::User;
  return g;
}

}  // namespace grade
