#include "rwt/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rwt/errors.hpp"

namespace rwt {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    return os;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw parse_error("cannot open for reading: " + path, 0);
    return is;
}

void format_double(std::ostream& os, double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    os.write(buf, res.ptr - buf);
}

long long parse_int(const std::string& text, std::size_t line) {
    long long v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw parse_error("expected an integer, got '" + text + "'", line);
    return v;
}

double parse_double(const std::string& text, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw parse_error("expected a number, got '" + text + "'", line);
    }
}

} // namespace

void write_dataset(std::ostream& os, const Dataset& data) {
    os << "d=" << data.dim() << " n=" << data.size() << '\n';
    for (std::size_t i = 0; i < data.size(); ++i) os << data.sample(i).to_string() << '\n';
}

void write_dataset_file(const std::string& path, const Dataset& data) {
    auto os = open_out(path);
    write_dataset(os, data);
}

Dataset read_dataset(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw parse_error("empty dataset file", 1);
    int d = 0;
    long long n = 0;
    {
        std::istringstream header(line);
        std::string dtok, ntok;
        header >> dtok >> ntok;
        if (dtok.rfind("d=", 0) != 0 || ntok.rfind("n=", 0) != 0)
            throw parse_error("expected header 'd=<int> n=<int>'", 1);
        d = static_cast<int>(parse_int(dtok.substr(2), 1));
        n = parse_int(ntok.substr(2), 1);
    }
    if (d < 1 || d > 64) throw parse_error("dimension must be in [1,64]", 1);
    if (n < 1) throw parse_error("sample count must be >= 1", 1);
    std::vector<std::uint64_t> samples;
    samples.reserve(static_cast<std::size_t>(n));
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (static_cast<int>(line.size()) != d)
            throw parse_error("sample has length " + std::to_string(line.size()) +
                                  ", expected " + std::to_string(d),
                              lineno);
        std::uint64_t bits = 0;
        for (int j = 0; j < d; ++j) {
            const char ch = line[static_cast<std::size_t>(j)];
            if (ch == '1')
                bits |= 1ULL << j;
            else if (ch != '0')
                throw parse_error("sample contains a character other than 0/1", lineno);
        }
        samples.push_back(bits);
    }
    if (static_cast<long long>(samples.size()) != n)
        throw parse_error("header announced n=" + std::to_string(n) + " but file has " +
                              std::to_string(samples.size()) + " samples",
                          lineno);
    return Dataset(d, std::move(samples));
}

Dataset read_dataset_file(const std::string& path) {
    auto is = open_in(path);
    return read_dataset(is);
}

void write_coefficients(std::ostream& os, const SparseDensity& density) {
    os << "index,coefficient\n";
    for (const BitVector& s : density.sorted_indices()) {
        os << s.to_string() << ',';
        format_double(os, density.coeffs.at(s.bits));
        os << '\n';
    }
}

void write_coefficients_file(const std::string& path, const SparseDensity& density) {
    auto os = open_out(path);
    write_coefficients(os, density);
}

SparseDensity read_coefficients(std::istream& is, int dim) {
    std::string line;
    if (!std::getline(is, line) || line != "index,coefficient")
        throw parse_error("expected header 'index,coefficient'", 1);
    SparseDensity out(dim);
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw parse_error("expected 'index,coefficient'", lineno);
        const std::string index = line.substr(0, comma);
        if (static_cast<int>(index.size()) != dim)
            throw parse_error("index length != " + std::to_string(dim), lineno);
        BitVector s;
        try {
            s = BitVector::from_string(index);
        } catch (const std::exception& e) {
            throw parse_error(e.what(), lineno);
        }
        out.set(s, parse_double(line.substr(comma + 1), lineno));
    }
    return out;
}

SparseDensity read_coefficients_file(const std::string& path, int dim) {
    auto is = open_in(path);
    return read_coefficients(is, dim);
}

void write_mixture(std::ostream& os, const BernoulliMixture& mix) {
    os << "d=" << mix.dim << " c=" << mix.component_count() << '\n';
    for (std::size_t c = 0; c < mix.component_count(); ++c) {
        if (c) os << ' ';
        format_double(os, mix.weights[c]);
    }
    os << '\n';
    for (const auto& comp : mix.components) {
        for (std::size_t i = 0; i < comp.size(); ++i) {
            if (i) os << ' ';
            format_double(os, comp[i]);
        }
        os << '\n';
    }
}

void write_mixture_file(const std::string& path, const BernoulliMixture& mix) {
    auto os = open_out(path);
    write_mixture(os, mix);
}

BernoulliMixture read_mixture(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw parse_error("empty mixture file", 1);
    int d = 0;
    long long c = 0;
    {
        std::istringstream header(line);
        std::string dtok, ctok;
        header >> dtok >> ctok;
        if (dtok.rfind("d=", 0) != 0 || ctok.rfind("c=", 0) != 0)
            throw parse_error("expected header 'd=<int> c=<int>'", 1);
        d = static_cast<int>(parse_int(dtok.substr(2), 1));
        c = parse_int(ctok.substr(2), 1);
    }
    if (c < 1) throw parse_error("component count must be >= 1", 1);
    if (!std::getline(is, line)) throw parse_error("missing weight line", 2);
    std::vector<double> weights;
    {
        std::istringstream ws(line);
        std::string tok;
        while (ws >> tok) weights.push_back(parse_double(tok, 2));
    }
    if (static_cast<long long>(weights.size()) != c)
        throw parse_error("expected " + std::to_string(c) + " weights", 2);
    std::vector<std::vector<double>> comps;
    for (long long i = 0; i < c; ++i) {
        const std::size_t lineno = static_cast<std::size_t>(3 + i);
        if (!std::getline(is, line)) throw parse_error("missing component row", lineno);
        std::vector<double> p;
        std::istringstream ps(line);
        std::string tok;
        while (ps >> tok) p.push_back(parse_double(tok, lineno));
        if (static_cast<int>(p.size()) != d)
            throw parse_error("expected " + std::to_string(d) + " probabilities", lineno);
        comps.push_back(std::move(p));
    }
    try {
        return BernoulliMixture(d, std::move(weights), std::move(comps));
    } catch (const std::exception& e) {
        throw parse_error(e.what(), 1);
    }
}

BernoulliMixture read_mixture_file(const std::string& path) {
    auto is = open_in(path);
    return read_mixture(is);
}

std::string stats_to_json(const TraversalStats& stats) {
    nlohmann::json j;
    j["recursive_calls"] = stats.recursive_calls;
    j["weight_evaluations"] = stats.weight_evaluations;
    j["retained_coefficients"] = stats.retained_coefficients;
    j["pruned_by_threshold"] = stats.pruned_by_threshold;
    j["pruned_by_order"] = stats.pruned_by_order;
    j["pruned_by_top_q"] = stats.pruned_by_top_q;
    j["wall_time_seconds"] = stats.wall_time_seconds;
    return j.dump(2) + "\n";
}

} // namespace rwt
