#ifndef MGF_REPORT_HPP
#define MGF_REPORT_HPP

// Structured output shared by the command-line tool and the acceptance run.
//
// Document layout, one item per line:
//   key: value
//   [table name]
//   col1 | col2 | ...        header
//   v1 | v2 | ...            rows
//   [end]
// Keys keep insertion order.  Values are printed exactly as given, so equal
// inputs produce byte-identical documents.

#include "core.hpp"
#include "laurent.hpp"

#include <iomanip>
#include <sstream>

namespace mgf {

inline std::string fmt(const real& x, int digits) {
    std::ostringstream os;
    os << std::setprecision(std::max(1, digits)) << std::scientific << x;
    return os.str();
}

inline std::string fmt(const complex& z, int digits) {
    if (z.imag() == 0) return fmt(z.real(), digits);
    return fmt(z.real(), digits) + (z.imag() < 0 ? " - " : " + ") + fmt(real(abs(z.imag())), digits) + "i";
}

class Report {
public:
    struct Table {
        std::string name;
        std::vector<std::string> header;
        std::vector<std::vector<std::string>> rows;
    };

    void set(const std::string& key, const std::string& value) {
        for (auto& kv : kv_)
            if (kv.first == key) {
                kv.second = value;
                return;
            }
        kv_.emplace_back(key, value);
    }
    void set(const std::string& key, const char* value) { set(key, std::string(value)); }
    void set(const std::string& key, int v) { set(key, std::to_string(v)); }
    void set(const std::string& key, bool v) { set(key, std::string(v ? "true" : "false")); }

    Table& table(const std::string& name, std::vector<std::string> header) {
        tables_.push_back({name, std::move(header), {}});
        return tables_.back();
    }

    const std::vector<std::pair<std::string, std::string>>& values() const { return kv_; }
    const std::vector<Table>& tables() const { return tables_; }

    std::string get(const std::string& key) const {
        for (const auto& kv : kv_)
            if (kv.first == key) return kv.second;
        return {};
    }

    std::string str() const {
        std::ostringstream os;
        for (const auto& [k, v] : kv_) os << k << ": " << v << "\n";
        for (const auto& t : tables_) {
            os << "[table " << t.name << "]\n";
            os << join(t.header) << "\n";
            for (const auto& r : t.rows) os << join(r) << "\n";
            os << "[end]\n";
        }
        return os.str();
    }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s;
        for (size_t i = 0; i < v.size(); ++i) {
            if (i) s += " | ";
            s += v[i];
        }
        return s;
    }

    std::vector<std::pair<std::string, std::string>> kv_;
    std::vector<Table> tables_;
};

// Adds fit metadata and a coefficient table to a report.
inline void add_fit(Report& r, const LaurentFitReport& f, int digits, const std::string& name = "coefficients") {
    r.set("variable", f.coefficients.variable());
    r.set("exponents", std::to_string(f.kmin) + ".." + std::to_string(f.kmax));
    r.set("window", fmt(real(f.xmin), 6) + " .. " + fmt(real(f.xmax), 6));
    r.set("samples", f.samples);
    r.set("residual", fmt(f.residual, 3));
    r.set("condition", fmt(f.condition, 3));
    auto& t = r.table(name, {"k", "value"});
    for (auto it = f.coefficients.terms().rbegin(); it != f.coefficients.terms().rend(); ++it)
        t.rows.push_back({std::to_string(it->first), fmt(it->second, digits)});
}

} // namespace mgf

#endif // MGF_REPORT_HPP
