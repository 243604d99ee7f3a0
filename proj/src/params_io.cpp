#include "cagm/params_io.hpp"

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

namespace cagm {

namespace {

template <typename T>
void write_line(std::ostream& out, const std::string& key, const std::vector<T>& values) {
  out << key;
  for (const T& v : values) out << ' ' << v;
  out << '\n';
}

}  // namespace

void write_params(std::ostream& out, const CagmParams& params) {
  params.validate();
  const auto old_precision = out.precision(17);
  out << "cagm-params " << kParamsFormatVersion << '\n';
  out << "n " << params.num_vertices() << '\n';
  out << "k " << params.num_attributes << '\n';
  out << "communities " << params.partition.num_communities() << '\n';
  auto membership = params.partition.membership();
  write_line(out, "membership", std::vector<Community>(membership.begin(), membership.end()));
  write_line(out, "d_intra", params.theta_m.d_intra);
  write_line(out, "d_inter", params.theta_m.d_inter);
  out << "tri_intra " << params.theta_m.tri_intra << '\n';
  out << "tri_inter " << params.theta_m.tri_inter << '\n';
  for (std::size_t c = 0; c < params.theta_x.prob.size(); ++c) {
    write_line(out, "theta_x." + std::to_string(c), params.theta_x.prob[c]);
  }
  out << "delta " << params.theta_f.delta << '\n';
  out << "degree_cap " << params.theta_f.degree_cap << '\n';
  for (std::size_t c = 0; c < params.theta_f.intra.size(); ++c) {
    write_line(out, "theta_f.intra." + std::to_string(c), params.theta_f.intra[c]);
  }
  write_line(out, "theta_f.inter", params.theta_f.inter);
  out.precision(old_precision);
}

namespace {

struct Record {
  std::size_t line = 0;
  std::vector<std::string> values;
};

class Fields {
 public:
  explicit Fields(std::istream& in) {
    std::string text;
    std::size_t line_no = 0;
    while (std::getline(in, text)) {
      ++line_no;
      std::istringstream tokens(text);
      std::string key;
      if (!(tokens >> key) || key.front() == '#') continue;
      Record rec{line_no, {}};
      for (std::string v; tokens >> v;) rec.values.push_back(v);
      if (!records_.emplace(key, std::move(rec)).second) {
        throw InputError("params line " + std::to_string(line_no) + ": duplicate key '" + key +
                         "'");
      }
    }
  }

  const Record& get(const std::string& key) const {
    auto it = records_.find(key);
    if (it == records_.end()) throw InputError("params: missing key '" + key + "'");
    return it->second;
  }

  template <typename T>
  std::vector<T> list(const std::string& key, std::size_t expected) const {
    const Record& rec = get(key);
    if (rec.values.size() != expected) {
      throw InputError("params line " + std::to_string(rec.line) + ": '" + key + "' has " +
                       std::to_string(rec.values.size()) + " values, expected " +
                       std::to_string(expected));
    }
    std::vector<T> out;
    out.reserve(expected);
    for (const std::string& s : rec.values) out.push_back(parse<T>(s, key, rec.line));
    return out;
  }

  template <typename T>
  T scalar(const std::string& key) const {
    return list<T>(key, 1).front();
  }

 private:
  template <typename T>
  static T parse(const std::string& s, const std::string& key, std::size_t line) {
    std::istringstream in(s);
    T value{};
    if (!s.empty() && s.front() == '-' && std::is_unsigned_v<T>) in.setstate(std::ios::failbit);
    in >> value;
    if (in.fail() || !in.eof()) {
      throw InputError("params line " + std::to_string(line) + ": bad value '" + s + "' for '" +
                       key + "'");
    }
    return value;
  }

  std::map<std::string, Record> records_;
};

}  // namespace

CagmParams read_params(std::istream& in) {
  const Fields fields(in);
  const int version = fields.scalar<int>("cagm-params");
  if (version != kParamsFormatVersion) {
    throw InputError("params: unsupported format version " + std::to_string(version));
  }
  const auto n = fields.scalar<std::size_t>("n");
  const auto k = fields.scalar<std::size_t>("k");
  const auto communities = fields.scalar<std::size_t>("communities");
  if (communities == 0) throw InputError("params: 'communities' must be positive");

  CagmParams params;
  params.partition = CommunityPartition(fields.list<Community>("membership", n), communities);
  params.num_attributes = k;
  params.theta_m.d_intra = fields.list<std::size_t>("d_intra", n);
  params.theta_m.d_inter = fields.list<std::size_t>("d_inter", n);
  params.theta_m.tri_intra = fields.scalar<std::size_t>("tri_intra");
  params.theta_m.tri_inter = fields.scalar<std::size_t>("tri_inter");
  for (std::size_t c = 0; c < communities; ++c) {
    params.theta_x.prob.push_back(fields.list<double>("theta_x." + std::to_string(c), k));
  }
  params.theta_f.delta = fields.scalar<double>("delta");
  if (!(params.theta_f.delta > 0.0 && params.theta_f.delta <= 1.0)) {
    throw InputError("params: delta must be in (0, 1]");
  }
  params.theta_f.degree_cap = fields.scalar<std::size_t>("degree_cap");
  const std::size_t buckets = max_bucket(params.theta_f.delta) + 1;
  for (std::size_t c = 0; c < communities; ++c) {
    params.theta_f.intra.push_back(
        fields.list<double>("theta_f.intra." + std::to_string(c), buckets));
  }
  params.theta_f.inter = fields.list<double>("theta_f.inter", buckets);
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("params: ") + e.what());
  }
  return params;
}

void save_params(const CagmParams& params, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write params file '" + path.string() + "'");
  write_params(out, params);
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

CagmParams load_params(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open params file '" + path.string() + "'");
  return read_params(in);
}

void write_ledger(std::ostream& out, const BudgetLedger& ledger) {
  const auto old_precision = out.precision(17);
  out << "# computation\tepsilon\ttwelfths\n";
  for (const auto& e : ledger.entries()) {
    out << e.name << '\t' << e.eps << '\t' << e.twelfths << '\n';
  }
  out << "total\t" << ledger.spent() << '\t' << ledger.spent_twelfths() << '\n';
  out << "eps_total\t" << ledger.eps_total() << '\n';
  out << "balanced\t" << (ledger.balanced() ? "yes" : "no") << '\n';
  out.precision(old_precision);
}

}  // namespace cagm
