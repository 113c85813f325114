#include "platoonsim/trajectory_io.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "text_format.hpp"

namespace platoonsim {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_cell(const std::string& cell, std::size_t line_no, std::size_t column) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        std::ostringstream os;
        os << "line " << line_no << ", column " << (column + 1);
        throw ParseError(os.str(), "expected a number, got \"" + cell + "\"");
    }
    return value;
}

std::string column_name(const char* prefix, int k) {
    std::ostringstream os;
    os << prefix << "_" << k;
    return os.str();
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory) {
    const int n = trajectory.dim();
    os << "t";
    for (int i = 1; i <= n; ++i) os << ",x_" << i;
    if (trajectory.has_controls()) {
        for (int i = 1; i <= n; ++i) os << ",u_" << i;
    }
    os << ",V\n";
    for (std::size_t k = 0; k < trajectory.samples(); ++k) {
        os << detail::format_g9(trajectory.times[k]);
        for (int i = 0; i < n; ++i) os << ',' << detail::format_g9(trajectory.states[k][i]);
        if (trajectory.has_controls()) {
            for (int i = 0; i < n; ++i) os << ',' << detail::format_g9(trajectory.controls[k][i]);
        }
        os << ',' << detail::format_g9(trajectory.energy[k]) << '\n';
    }
}

std::string trajectory_csv(const Trajectory& trajectory) {
    std::ostringstream os;
    write_trajectory_csv(os, trajectory);
    return os.str();
}

void save_trajectory_csv(const Trajectory& trajectory, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write trajectory file: " + path.string());
    write_trajectory_csv(out, trajectory);
}

Trajectory read_trajectory_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ParseError("line 1", "empty trajectory file");
    const std::vector<std::string> header = split_csv(line);
    if (header.size() < 3 || header[0] != "t" || header.back() != "V") {
        throw ParseError("line 1", "expected header t,x_1,...[,u_1,...],V");
    }
    int n = 0;
    std::size_t column = 1;
    while (column < header.size() - 1 && header[column] == column_name("x", n + 1)) {
        ++n;
        ++column;
    }
    if (n == 0) throw ParseError("line 1", "no state columns x_1,... found");
    bool has_controls = false;
    if (column < header.size() - 1) {
        for (int i = 1; i <= n; ++i, ++column) {
            if (column >= header.size() - 1 || header[column] != column_name("u", i)) {
                throw ParseError("line 1", "malformed control columns; expected u_1..u_" +
                                               std::to_string(n));
            }
        }
        has_controls = true;
    }
    if (column != header.size() - 1) {
        throw ParseError("line 1", "unexpected trailing header columns before V");
    }

    const std::size_t expected = 2 + static_cast<std::size_t>(has_controls ? 2 * n : n);
    Trajectory traj;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> cells = split_csv(line);
        if (cells.size() != expected) {
            std::ostringstream os;
            os << "line " << line_no;
            std::ostringstream msg;
            msg << "expected " << expected << " columns, got " << cells.size();
            throw ParseError(os.str(), msg.str());
        }
        std::size_t c = 0;
        traj.times.push_back(parse_cell(cells[c], line_no, c));
        ++c;
        Eigen::VectorXd x(n);
        for (int i = 0; i < n; ++i, ++c) x[i] = parse_cell(cells[c], line_no, c);
        traj.states.push_back(std::move(x));
        if (has_controls) {
            Eigen::VectorXd u(n);
            for (int i = 0; i < n; ++i, ++c) u[i] = parse_cell(cells[c], line_no, c);
            traj.controls.push_back(std::move(u));
        }
        traj.energy.push_back(parse_cell(cells[c], line_no, c));
    }
    if (traj.times.empty()) throw ParseError("line 2", "trajectory has no samples");
    return traj;
}

Trajectory load_trajectory_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("", "cannot open trajectory file: " + path.string());
    return read_trajectory_csv(in);
}

}  // namespace platoonsim
