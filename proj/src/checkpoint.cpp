#include "grade/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace grade {

namespace {

constexpr const char* kMagic = "grade-checkpoint-v1";

std::vector<int> read_dims(std::istringstream& ss, const std::string& key) {
  std::string word;
  ss >> word;
  if (word != key) throw std::runtime_error("checkpoint: expected '" + key + "'");
  std::vector<int> dims;
  int d;
  while (ss >> d) dims.push_back(d);
  if (dims.size() < 2) throw std::runtime_error("checkpoint: bad '" + key + "' line");
  return dims;
}

}  // namespace

void save_checkpoint(const std::string& path, const ModelParams& params, std::uint64_t seed) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);

  out << kMagic << "\n";
  out << "seed " << seed << "\n";
  out << "gcn_dims";
  for (int d : params.gcn_dims()) out << " " << d;
  out << "\n";
  out << "head_dims";
  for (int d : params.head_dims()) out << " " << d;
  out << "\n";
  const std::size_t n = params.flat_size();
  out << "values " << n << "\n";
  char buf[64];
  for (std::size_t i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", params.flat_get(i));
    out << buf << "\n";
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  std::string line;
  if (!std::getline(in, line) || line != kMagic)
    throw std::runtime_error("checkpoint: bad magic in " + path);

  Checkpoint cp;
  if (!std::getline(in, line)) throw std::runtime_error("checkpoint: truncated header");
  {
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    if (word != "seed" || !(ss >> cp.seed)) throw std::runtime_error("checkpoint: bad seed line");
  }

  std::vector<int> gcn_dims, head_dims;
  if (!std::getline(in, line)) throw std::runtime_error("checkpoint: truncated header");
  {
    std::istringstream ss(line);
    gcn_dims = read_dims(ss, "gcn_dims");
  }
  if (!std::getline(in, line)) throw std::runtime_error("checkpoint: truncated header");
  {
    std::istringstream ss(line);
    head_dims = read_dims(ss, "head_dims");
  }

  std::size_t count = 0;
  if (!std::getline(in, line)) throw std::runtime_error("checkpoint: truncated header");
  {
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    if (word != "values" || !(ss >> count))
      throw std::runtime_error("checkpoint: bad values line");
  }

  ModelParams& p = cp.params;
  for (size_t l = 0; l + 1 < gcn_dims.size(); ++l)
    p.gcn_weights.emplace_back(Eigen::MatrixXd::Zero(gcn_dims[l], gcn_dims[l + 1]));
  for (size_t l = 0; l + 1 < head_dims.size(); ++l) {
    p.head_weights.emplace_back(Eigen::MatrixXd::Zero(head_dims[l], head_dims[l + 1]));
    p.head_biases.emplace_back(Eigen::VectorXd::Zero(head_dims[l + 1]));
  }
  if (p.flat_size() != count)
    throw std::runtime_error("checkpoint: value count " + std::to_string(count) +
                             " does not match dims (" + std::to_string(p.flat_size()) + ")");

  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line))
      throw std::runtime_error("checkpoint: truncated at value " + std::to_string(i));
    try {
      p.flat_set(i, std::stod(line));
    } catch (const std::exception&) {
      throw std::runtime_error("checkpoint: bad value at index " + std::to_string(i));
    }
  }
  return cp;
}

}  // namespace grade
