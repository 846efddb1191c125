// csv.cpp — trace serialization and schema validation.

#include <dgm/csv.hpp>

#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace dgm {

const char* const kTraceCsvHeader =
    "method,seed,k,comms_per_node,total_comms,avg_rel_err,max_gap,dis_x,dis_y,diverged";

namespace {

std::string fmt_real(double v) {
    if (std::isnan(v)) return "nan";
    std::ostringstream o;
    o << std::setprecision(17) << v;
    return o.str();
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string::size_type start = 0;
    while (true) {
        auto pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

long long parse_int(const std::string& field, const char* what, long long row) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        std::ostringstream msg;
        msg << "trace csv: row " << row << ": " << what << " is not an integer: '"
            << field << "'";
        throw std::invalid_argument(msg.str());
    }
    return v;
}

double parse_real(const std::string& field, const char* what, long long row) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(field, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != field.size() || field.empty()) {
        std::ostringstream msg;
        msg << "trace csv: row " << row << ": " << what << " is not a real: '" << field
            << "'";
        throw std::invalid_argument(msg.str());
    }
    return v;
}

}  // namespace

void write_trace_csv(std::ostream& out, const RunTrace& trace) {
    out << kTraceCsvHeader << "\n";
    for (std::size_t r = 0; r < trace.records.size(); ++r) {
        const IterRecord& rec = trace.records[r];
        const bool last = r + 1 == trace.records.size();
        out << trace.method << ',' << trace.seed << ',' << rec.k << ','
            << rec.comms_per_node << ',' << trace.n * rec.comms_per_node << ','
            << fmt_real(rec.avg_rel_err) << ',' << fmt_real(rec.max_gap) << ','
            << fmt_real(rec.dis_x) << ',' << fmt_real(rec.dis_y) << ','
            << (trace.diverged && last ? 1 : 0) << "\n";
    }
}

long long validate_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kTraceCsvHeader)
        throw std::invalid_argument("trace csv: missing or malformed header");
    long long rows = 0;
    long long prev_k = -1, prev_comms = -1;
    bool saw_diverged = false;
    while (std::getline(in, line)) {
        if (line.empty() && in.eof()) break;  // tolerate a trailing newline
        ++rows;
        if (saw_diverged)
            throw std::invalid_argument(
                "trace csv: diverged flag appears before the final row");
        std::vector<std::string> f = split_fields(line);
        if (f.size() != 10) {
            std::ostringstream msg;
            msg << "trace csv: row " << rows << ": expected 10 fields, got " << f.size();
            throw std::invalid_argument(msg.str());
        }
        if (f[0].empty()) {
            std::ostringstream msg;
            msg << "trace csv: row " << rows << ": empty method name";
            throw std::invalid_argument(msg.str());
        }
        parse_int(f[1], "seed", rows);
        long long k = parse_int(f[2], "k", rows);
        long long comms = parse_int(f[3], "comms_per_node", rows);
        long long total = parse_int(f[4], "total_comms", rows);
        parse_real(f[5], "avg_rel_err", rows);
        parse_real(f[6], "max_gap", rows);
        double dx = parse_real(f[7], "dis_x", rows);
        double dy = parse_real(f[8], "dis_y", rows);
        if (!std::isfinite(dx) || dx < 0.0 || !std::isfinite(dy) || dy < 0.0) {
            std::ostringstream msg;
            msg << "trace csv: row " << rows << ": disagreement must be finite and >= 0";
            throw std::invalid_argument(msg.str());
        }
        if (f[9] != "0" && f[9] != "1") {
            std::ostringstream msg;
            msg << "trace csv: row " << rows << ": diverged flag must be 0 or 1";
            throw std::invalid_argument(msg.str());
        }
        if (f[9] == "1") saw_diverged = true;
        if (k <= prev_k) {
            std::ostringstream msg;
            msg << "trace csv: row " << rows << ": iteration numbers must increase";
            throw std::invalid_argument(msg.str());
        }
        if (comms < prev_comms) {
            std::ostringstream msg;
            msg << "trace csv: row " << rows
                << ": communication counts must be nondecreasing";
            throw std::invalid_argument(msg.str());
        }
        if (total < comms) {
            std::ostringstream msg;
            msg << "trace csv: row " << rows << ": total_comms below comms_per_node";
            throw std::invalid_argument(msg.str());
        }
        prev_k = k;
        prev_comms = comms;
    }
    if (rows == 0) throw std::invalid_argument("trace csv: no data rows");
    return rows;
}

}  // namespace dgm
