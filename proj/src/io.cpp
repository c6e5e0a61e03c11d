#include "lor/io.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <fstream>
#include <sstream>

namespace lor {

namespace {

const BigInt kJsonSafeMax = (BigInt(1) << 53) - 1;

BigInt gcd_big(BigInt a, BigInt b) {
    a = boost::multiprecision::abs(a);
    b = boost::multiprecision::abs(b);
    while (b != 0) {
        BigInt t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace

Json bigint_to_json(const BigInt& v) {
    if (v >= -kJsonSafeMax && v <= kJsonSafeMax) return static_cast<int64_t>(v);
    return v.str();
}

BigInt bigint_from_json(const Json& j) {
    if (j.is_number_integer()) return BigInt(j.get<int64_t>());
    if (j.is_string()) return BigInt(j.get<std::string>());
    throw ParseError("expected an integer or decimal string, got " + j.dump());
}

Json params_to_json(const Params& p) {
    Json j = Json::object();
    for (const auto& [k, v] : p.scalars) j["scalars"][k] = v;
    for (const auto& [k, v] : p.lists) j["lists"][k] = v;
    return j;
}

Params params_from_json(const Json& j) {
    Params p;
    if (j.contains("scalars"))
        for (auto it = j["scalars"].begin(); it != j["scalars"].end(); ++it)
            p.scalars[it.key()] = it.value().get<int64_t>();
    if (j.contains("lists"))
        for (auto it = j["lists"].begin(); it != j["lists"].end(); ++it)
            p.lists[it.key()] = it.value().get<std::vector<int64_t>>();
    return p;
}

Json weights_to_json(const WeightSequence& a) {
    Json j;
    j["n"] = a.size();
    if (!a.name().empty()) j["name"] = a.name();
    Json w = Json::array();
    for (const auto& v : a.weights()) w.push_back(bigint_to_json(v));
    j["weights"] = std::move(w);
    if (!a.params().empty()) j["params"] = params_to_json(a.params());
    return j;
}

WeightSequence weights_from_json(const Json& j) {
    if (!j.contains("weights") || !j["weights"].is_array())
        throw ParseError("weights document needs a 'weights' array");
    std::vector<BigInt> w;
    w.reserve(j["weights"].size());
    for (const auto& e : j["weights"]) w.push_back(bigint_from_json(e));
    std::string name = j.value("name", std::string{});
    Params p = j.contains("params") ? params_from_json(j["params"]) : Params{};
    return WeightSequence(std::move(w), std::move(name), std::move(p));
}

ParsedWeights parse_weights_text(const std::string& text) {
    std::vector<BigRational> entries;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) {
            try {
                auto slash = tok.find('/');
                if (slash == std::string::npos) {
                    entries.emplace_back(BigInt(tok));
                } else {
                    BigInt num(tok.substr(0, slash));
                    BigInt den(tok.substr(slash + 1));
                    if (den == 0) throw std::runtime_error("zero denominator");
                    entries.emplace_back(num, den);
                }
            } catch (const std::exception&) {
                throw ParseError("line " + std::to_string(lineno) + ": cannot parse weight '" +
                                 tok + "'");
            }
        }
    }
    if (entries.empty()) throw ParseError("no weights found");
    BigInt lcm = 1;
    for (const auto& r : entries) {
        BigInt den = boost::multiprecision::denominator(r);
        lcm = lcm / gcd_big(lcm, den) * den;
    }
    std::vector<BigInt> w;
    w.reserve(entries.size());
    for (const auto& r : entries)
        w.push_back(boost::multiprecision::numerator(r) *
                    (lcm / boost::multiprecision::denominator(r)));
    return ParsedWeights{WeightSequence(std::move(w)), lcm};
}

ParsedWeights parse_weights_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open weights file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        Json j = Json::parse(text, nullptr, true, true);
        return ParsedWeights{weights_from_json(j), BigInt(1)};
    }
    return parse_weights_text(text);
}

Json profile_to_json(const ResilienceProfile& p) {
    Json j;
    j["target"] = bigint_to_json(p.target);
    j["n"] = p.n;
    j["achievable"] = p.achievable;
    j["denominator_log2"] = p.n;
    Json counts = Json::object();
    for (std::size_t d = 0; d < p.counts.size(); ++d)
        if (p.counts[d] > 0) counts[std::to_string(d)] = p.counts[d];
    j["counts"] = std::move(counts);
    if (p.max_depth >= 0) {
        j["max_depth"] = p.max_depth;
        j["truncated"] = p.truncated;
    }
    return j;
}

Json qk_to_json(const QkResult& q) {
    Json j;
    j["n"] = q.n;
    j["value_num"] = bigint_to_json(boost::multiprecision::numerator(q.value));
    j["value_den"] = bigint_to_json(boost::multiprecision::denominator(q.value));
    j["value"] = static_cast<double>(q.value);
    j["mass"] = q.mass;
    j["argmax_x"] = bigint_to_json(q.argmax_x);
    j["ties"] = q.ties;
    j["candidates"] = q.candidates;
    return j;
}

Json basis_to_json(const AdditiveBasis& b) {
    Json j;
    j["order"] = b.order;
    j["range"] = b.range;
    j["elements"] = b.elements;
    j["size"] = b.elements.size();
    j["sum_of_squares"] = bigint_to_json(b.sum_of_squares);
    return j;
}

Json estimate_to_json(const EstimateReport& r) {
    Json j;
    j["estimate"] = r.estimate;
    j["hits"] = r.hits;
    j["samples"] = r.samples;
    j["ci_low"] = r.ci_low;
    j["ci_high"] = r.ci_high;
    j["k"] = r.k;
    j["x"] = bigint_to_json(r.x);
    j["method"] = stat_method_name(r.method);
    if (r.method == StatMethod::monte_carlo) j["seed"] = r.seed;
    return j;
}

Json sweep_to_json(const SweepResult& s) {
    Json rows = Json::array();
    for (const SweepRow& r : s.rows) {
        Json row;
        row["n"] = r.n;
        if (r.failed) {
            row["failed"] = true;
            row["error"] = r.error;
        } else {
            row["estimate"] = r.estimate;
            row["ci_low"] = r.ci_low;
            row["ci_high"] = r.ci_high;
            row["hits"] = r.hits;
            row["samples"] = r.samples;
        }
        rows.push_back(std::move(row));
    }
    Json j;
    j["rows"] = std::move(rows);
    j["fitted_slope"] = s.fitted_slope;
    j["fitted_intercept"] = s.fitted_intercept;
    j["slope_stderr"] = s.slope_stderr;
    j["fit_rows"] = s.fit_rows;
    if (!s.excluded_zero_rows.empty()) {
        j["excluded_zero_rows"] = s.excluded_zero_rows;
        j["warning"] = s.warning;
    }
    return j;
}

Json certify_to_json(const CertifyStats& c) {
    Json j;
    j["samples"] = c.samples;
    j["successes"] = c.successes;
    j["success_rate"] = static_cast<double>(c.successes) / static_cast<double>(c.samples);
    j["failures"] = c.failures;
    j["max_size"] = c.max_size;
    j["size_bound"] = c.size_bound;
    j["all_verified"] = c.all_verified;
    return j;
}

Json bestats_to_json(const BerryEsseenStats& b) {
    Json j;
    j["sigma"] = b.sigma;
    j["rho"] = b.rho;
    j["sigma_sq_exact"] = bigint_to_json(b.sigma_sq_exact);
    j["rho_exact"] = bigint_to_json(b.rho_exact);
    j["kolmogorov_distance"] = b.kolmogorov_distance;
    j["ratio"] = b.ratio;
    j["method"] = stat_method_name(b.method);
    if (b.method == StatMethod::monte_carlo) j["samples"] = b.samples;
    return j;
}

Json make_run_record(const std::string& command, const Json& inputs, const Json& outputs,
                     std::optional<uint64_t> seed) {
    Json j;
    j["schema"] = kRunSchema;
    j["version"] = kVersion;
    j["command"] = command;
    if (seed) j["seed"] = *seed;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    return j;
}

std::string record_to_string(const Json& record) {
    return record.dump(2) + "\n";
}

std::vector<int64_t> parse_n_grid(const std::string& text) {
    std::vector<int64_t> grid;
    try {
        if (text.find(',') != std::string::npos) {
            std::istringstream in(text);
            std::string tok;
            while (std::getline(in, tok, ',')) grid.push_back(std::stoll(tok));
            return grid;
        }
        auto c1 = text.find(':');
        auto c2 = text.find(':', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw ParseError("grid spec needs start:end:step or a comma list: " + text);
        int64_t start = std::stoll(text.substr(0, c1));
        int64_t end = std::stoll(text.substr(c1 + 1, c2 - c1 - 1));
        std::string step = text.substr(c2 + 1);
        if (step.empty()) throw ParseError("empty grid step");
        if (step[0] == 'x') {
            int64_t f = std::stoll(step.substr(1));
            if (f < 2) throw ParseError("geometric grid factor must be >= 2");
            for (int64_t n = start; n <= end; n *= f) grid.push_back(n);
        } else if (step[0] == '+') {
            int64_t d = std::stoll(step.substr(1));
            if (d < 1) throw ParseError("arithmetic grid step must be >= 1");
            for (int64_t n = start; n <= end; n += d) grid.push_back(n);
        } else {
            throw ParseError("grid step must start with 'x' or '+': " + step);
        }
        return grid;
    } catch (const std::invalid_argument&) {
        throw ParseError("cannot parse grid spec: " + text);
    } catch (const std::out_of_range&) {
        throw ParseError("grid value out of range: " + text);
    }
}

namespace {

std::string csv_escape(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

void flatten_csv(const std::string& prefix, const Json& j, std::ostringstream& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten_csv(prefix.empty() ? it.key() : prefix + "." + it.key(), it.value(), out);
    } else if (j.is_array()) {
        out << prefix << "," << csv_escape(j) << "\n";
    } else {
        out << prefix << "," << csv_escape(j) << "\n";
    }
}

}  // namespace

std::string to_csv(const std::string& command, const Json& outputs) {
    std::ostringstream out;
    if (command == "sweep" && outputs.contains("rows")) {
        out << "n,estimate,ci_low,ci_high,hits,samples,failed\n";
        for (const auto& row : outputs["rows"]) {
            bool failed = row.value("failed", false);
            out << row["n"].get<int64_t>() << ",";
            if (failed)
                out << ",,,,," << "1\n";
            else
                out << row["estimate"].get<double>() << "," << row["ci_low"].get<double>() << ","
                    << row["ci_high"].get<double>() << "," << row["hits"].get<uint64_t>() << ","
                    << row["samples"].get<uint64_t>() << ",0\n";
        }
        out << "# fitted_slope," << outputs["fitted_slope"].get<double>() << "\n";
        out << "# fitted_intercept," << outputs["fitted_intercept"].get<double>() << "\n";
        out << "# slope_stderr," << outputs["slope_stderr"].get<double>() << "\n";
        return out.str();
    }
    if (command == "profile" && outputs.contains("counts")) {
        out << "distance,count\n";
        for (auto it = outputs["counts"].begin(); it != outputs["counts"].end(); ++it)
            out << it.key() << "," << it.value().dump() << "\n";
        return out.str();
    }
    out << "key,value\n";
    flatten_csv("", outputs, out);
    return out.str();
}

}  // namespace lor
