#include "gibbs/cli/config.hpp"

#include "gibbs/cli/csv.hpp"
#include "gibbs/errors.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace gibbs::cli {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"model", {"model", "beta"}},
        {"sweep",
         {"chain_length", "a_size", "c_size", "b_range", "quantities", "seed", "q", "mode", "threads", "corr_restarts",
          "corr_max_iters", "corr_tol"}},
        {"output", {"timing"}},
    };
    return keys;
}

std::string trimmed(std::string s) {
    boost::algorithm::trim(s);
    return s;
}

template <typename T>
T parse_integer(const std::string& key, const std::string& raw) {
    const std::string text = trimmed(raw);
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw ConfigInvalid("'" + key + "' expects an integer, got '" + raw + "'");
    }
    return value;
}

double parse_real(const std::string& key, const std::string& raw) {
    try {
        return parse_double(trimmed(raw));
    } catch (const Error&) {
        throw ConfigInvalid("'" + key + "' expects a number, got '" + raw + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& raw) {
    const std::string t = boost::algorithm::to_lower_copy(trimmed(raw));
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ConfigInvalid("'" + key + "' expects a boolean, got '" + raw + "'");
}

std::string join(const std::vector<std::string>& parts, const char* sep) { return boost::algorithm::join(parts, sep); }

}  // namespace

std::vector<int> parse_int_range(const std::string& text) {
    std::vector<int> out;
    std::vector<std::string> parts;
    boost::algorithm::split(parts, text, boost::algorithm::is_any_of(","));
    for (const auto& raw : parts) {
        const std::string part = trimmed(raw);
        if (part.empty()) continue;
        const auto dots = part.find("..");
        if (dots == std::string::npos) {
            out.push_back(parse_integer<int>("b_range", part));
            continue;
        }
        const int lo = parse_integer<int>("b_range", part.substr(0, dots));
        const int hi = parse_integer<int>("b_range", part.substr(dots + 2));
        if (hi < lo) throw ConfigInvalid("b_range '" + part + "' is empty");
        for (int v = lo; v <= hi; ++v) out.push_back(v);
    }
    if (out.empty()) throw ConfigInvalid("b_range is empty");
    return out;
}

RunConfig parse_config(std::istream& in) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigInvalid(std::string("malformed config: ") + e.what());
    }

    for (const auto& [section, body] : tree) {
        const auto it = known_keys().find(section);
        if (it == known_keys().end()) {
            if (body.empty()) throw ConfigInvalid("key '" + section + "' outside of any section");
            throw ConfigInvalid("unknown section [" + section + "]");
        }
        for (const auto& [key, value] : body) {
            if (!it->second.count(key)) throw ConfigInvalid("unknown key '" + key + "' in [" + section + "]");
        }
    }

    auto get = [&](const char* section, const char* key) -> std::optional<std::string> {
        const auto child = tree.get_child_optional(pt::ptree::path_type(std::string(section) + "." + key, '.'));
        if (!child) return std::nullopt;
        return child->data();
    };
    auto require = [&](const char* section, const char* key) {
        auto v = get(section, key);
        if (!v || trimmed(*v).empty()) throw ConfigInvalid("missing required key '" + std::string(key) + "' in [" + section + "]");
        return *v;
    };

    RunConfig config;
    SweepConfig& s = config.sweep;
    try {
        s.model = ModelSpec::parse(trimmed(require("model", "model")));
    } catch (const UnknownModel&) {
        throw;
    } catch (const ConfigInvalid&) {
        throw;
    } catch (const Error& e) {
        throw ConfigInvalid(std::string("model: ") + e.what());
    }
    if (auto v = get("model", "beta")) s.beta = parse_real("beta", *v);

    s.chain_length = parse_integer<int>("chain_length", require("sweep", "chain_length"));
    s.b_range = parse_int_range(require("sweep", "b_range"));
    {
        std::vector<std::string> qs;
        boost::algorithm::split(qs, require("sweep", "quantities"), boost::algorithm::is_any_of(","));
        s.quantities.clear();
        for (auto& q : qs) {
            q = trimmed(q);
            if (!q.empty()) s.quantities.push_back(q);
        }
    }
    if (auto v = get("sweep", "a_size")) s.a_size = parse_integer<int>("a_size", *v);
    if (auto v = get("sweep", "c_size")) s.c_size = parse_integer<int>("c_size", *v);
    if (auto v = get("sweep", "seed")) s.seed = parse_integer<std::uint64_t>("seed", *v);
    if (auto v = get("sweep", "q")) s.q = parse_real("q", *v);
    if (auto v = get("sweep", "mode")) {
        try {
            s.mode = parse_chain_mode(trimmed(*v));
        } catch (const Error& e) {
            throw ConfigInvalid(e.what());
        }
    }
    if (auto v = get("sweep", "threads")) s.threads = parse_integer<int>("threads", *v);
    if (auto v = get("sweep", "corr_restarts")) s.corr.restarts = parse_integer<int>("corr_restarts", *v);
    if (auto v = get("sweep", "corr_max_iters")) s.corr.max_iters = parse_integer<int>("corr_max_iters", *v);
    if (auto v = get("sweep", "corr_tol")) s.corr.tol = parse_real("corr_tol", *v);
    s.corr.seed = s.seed;
    if (auto v = get("output", "timing")) config.output.timing = parse_bool("timing", *v);
    return config;
}

RunConfig parse_config_text(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigInvalid("cannot open config file '" + path + "'");
    return parse_config(in);
}

std::string format_config(const RunConfig& config) {
    const SweepConfig& s = config.sweep;
    std::vector<std::string> bs;
    for (int b : s.b_range) bs.push_back(std::to_string(b));
    std::ostringstream out;
    out << "[model]\n"
        << "model = " << s.model.to_string() << "\n"
        << "beta = " << format_double(s.beta) << "\n\n"
        << "[sweep]\n"
        << "chain_length = " << s.chain_length << "\n"
        << "a_size = " << s.a_size << "\n"
        << "c_size = " << s.c_size << "\n"
        << "b_range = " << join(bs, ",") << "\n"
        << "quantities = " << join(s.quantities, ",") << "\n"
        << "seed = " << s.seed << "\n"
        << "q = " << format_double(s.q) << "\n"
        << "mode = " << to_string(s.mode) << "\n"
        << "threads = " << s.threads << "\n"
        << "corr_restarts = " << s.corr.restarts << "\n"
        << "corr_max_iters = " << s.corr.max_iters << "\n"
        << "corr_tol = " << format_double(s.corr.tol) << "\n\n"
        << "[output]\n"
        << "timing = " << (config.output.timing ? "true" : "false") << "\n";
    return out.str();
}

}  // namespace gibbs::cli
