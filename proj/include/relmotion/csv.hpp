#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "relmotion/errors.hpp"
#include "relmotion/pair_index.hpp"
#include "relmotion/sde.hpp"

namespace relmotion {

/// Serializes a double with 17 significant digits, locale-independent, so
/// that file round trips reproduce the value exactly.
inline std::string format_double(double x) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
    double out = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ParseError("invalid number: '" + std::string(s) + "'");
    return out;
}

/// Trajectory files are flat CSV: header `t,entity,c0..c{d-1}`, then one row
/// per (step, entity) in grid order. Entity labels are `p<i>` for particles
/// (1-based), `r<hi>_<lo>` for pair coordinates in canonical order, and
/// `com` for the center of mass.
enum class TrajectoryKind { particles, relative, com_only };

struct Trajectory {
    TrajectoryKind kind = TrajectoryKind::particles;
    std::size_t n = 0; // particle count; 0 when unknown (com_only)
    PathBundle states; // particle states or pair coordinates
    std::optional<PathBundle> com;
};

namespace detail {

inline void write_header(std::ostream& os, std::size_t dim) {
    os << "t,entity";
    for (std::size_t c = 0; c < dim; ++c) os << ",c" << c;
    os << "\n";
}

inline void write_row(std::ostream& os, const std::string& t, std::string_view entity,
                      std::span<const double> point) {
    os << t << ',' << entity;
    for (double x : point) os << ',' << format_double(x);
    os << "\n";
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

} // namespace detail

inline void write_particles_csv(std::ostream& os, const PathBundle& particles) {
    detail::write_header(os, particles.dim);
    const std::size_t rows = particles.recorded_steps() + 1;
    for (std::size_t k = 0; k < rows; ++k) {
        const std::string t = format_double(particles.time(k));
        for (std::size_t i = 0; i < particles.entities; ++i)
            detail::write_row(os, t, "p" + std::to_string(i + 1), particles.state(k, i));
    }
}

/// Writes a relative trajectory; when a com path is supplied the file is
/// self-contained for reconstruction.
inline void write_relative_csv(std::ostream& os, const PathBundle& pairs,
                               const PathBundle* com = nullptr) {
    const std::size_t n = particles_for_pair_count(pairs.entities);
    const auto labels = enumerate_pairs(n);
    detail::write_header(os, pairs.dim);
    std::size_t rows = pairs.recorded_steps() + 1;
    if (com != nullptr) rows = std::min(rows, com->recorded_steps() + 1);
    for (std::size_t k = 0; k < rows; ++k) {
        const std::string t = format_double(pairs.time(k));
        for (std::size_t r = 0; r < pairs.entities; ++r)
            detail::write_row(os, t,
                              "r" + std::to_string(labels[r].hi) + "_" +
                                  std::to_string(labels[r].lo),
                              pairs.state(k, r));
        if (com != nullptr) detail::write_row(os, t, "com", com->state(k, 0));
    }
}

/// Strict reader for the grid-ordered files this library writes: the first
/// step block fixes the entity sequence, every later block must repeat it.
inline Trajectory read_trajectory_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ParseError("empty trajectory file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = detail::split_csv(line);
    if (header.size() < 3 || header[0] != "t" || header[1] != "entity")
        throw ParseError("bad trajectory header: '" + line + "'");
    for (std::size_t c = 0; c + 2 < header.size(); ++c)
        if (header[c + 2] != "c" + std::to_string(c))
            throw ParseError("bad trajectory header column: '" + std::string(header[c + 2]) + "'");
    const std::size_t dim = header.size() - 2;

    std::vector<std::string> entities; // first-block order
    std::vector<double> times;
    std::vector<std::vector<double>> columns; // per entity slot, values per step
    bool first_block_done = false;
    std::size_t slot = 0;
    std::size_t row_no = 1;
    while (std::getline(is, line)) {
        ++row_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = detail::split_csv(line);
        if (fields.size() != dim + 2)
            throw ParseError("row " + std::to_string(row_no) + ": expected " +
                             std::to_string(dim + 2) + " fields, got " +
                             std::to_string(fields.size()));
        const double t = parse_double(fields[0]);
        const std::string entity(fields[1]);
        if (!first_block_done) {
            if (times.empty()) times.push_back(t);
            if (t != times.front()) {
                first_block_done = true;
                times.push_back(t);
                slot = 0;
            }
        }
        if (first_block_done) {
            if (slot == 0 && t != times.back()) times.push_back(t);
            if (entity != entities[slot])
                throw ParseError("row " + std::to_string(row_no) + ": entity '" + entity +
                                 "' breaks the block order, expected '" + entities[slot] + "'");
        } else {
            entities.push_back(entity);
            columns.emplace_back();
        }
        const std::size_t idx = first_block_done ? slot : entities.size() - 1;
        for (std::size_t c = 0; c < dim; ++c) columns[idx].push_back(parse_double(fields[c + 2]));
        if (first_block_done) slot = (slot + 1) % entities.size();
    }
    if (entities.empty()) throw ParseError("trajectory file has no data rows");
    if (first_block_done && slot != 0) throw ParseError("truncated final step block");

    const std::size_t rows = columns[0].size() / dim;
    for (const auto& col : columns)
        if (col.size() != rows * dim) throw ParseError("ragged entity columns");
    const double dt = rows > 1 ? times[1] - times[0] : 0.0;
    if (rows > 1 && !(dt > 0.0)) throw ParseError("time column is not increasing");
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double expected = static_cast<double>(k) * dt;
        if (std::abs(times[k] - expected) > 1e-9 * std::max(1.0, std::abs(expected)))
            throw ParseError("time column is not a uniform grid at row block " +
                             std::to_string(k));
    }

    // Classify entities; label sets must be exactly complete.
    std::vector<std::size_t> particle_slots, pair_slots;
    std::optional<std::size_t> com_slot;
    for (std::size_t s = 0; s < entities.size(); ++s) {
        const std::string& e = entities[s];
        if (e == "com") {
            if (com_slot) throw ParseError("duplicate com entity");
            com_slot = s;
        } else if (e.size() > 1 && e[0] == 'p') {
            particle_slots.push_back(s);
        } else if (e.size() > 1 && e[0] == 'r') {
            pair_slots.push_back(s);
        } else {
            throw ParseError("unknown entity label '" + e + "'");
        }
    }
    if (!particle_slots.empty() && !pair_slots.empty())
        throw ParseError("trajectory mixes particle and pair entities");

    Trajectory traj;
    auto assemble = [&](const std::vector<std::size_t>& slots) {
        PathBundle b{dt, slots.size(), dim, rows ? rows - 1 : 0, {}, false, 0};
        b.states.resize(rows * slots.size() * dim);
        for (std::size_t k = 0; k < rows; ++k)
            for (std::size_t s = 0; s < slots.size(); ++s)
                for (std::size_t c = 0; c < dim; ++c)
                    b.states[(k * slots.size() + s) * dim + c] = columns[slots[s]][k * dim + c];
        return b;
    };

    if (!particle_slots.empty()) {
        if (com_slot) throw ParseError("particle trajectory cannot carry a com entity");
        for (std::size_t i = 0; i < particle_slots.size(); ++i)
            if (entities[particle_slots[i]] != "p" + std::to_string(i + 1))
                throw ParseError("particle labels must be p1..pN in order");
        traj.kind = TrajectoryKind::particles;
        traj.n = particle_slots.size();
        if (traj.n < 2) throw ParseError("particle trajectory needs at least two particles");
        traj.states = assemble(particle_slots);
        return traj;
    }
    if (!pair_slots.empty()) {
        std::size_t n = 0;
        try {
            n = particles_for_pair_count(pair_slots.size());
        } catch (const DimensionError&) {
            throw ParseError("pair entities do not form a complete set: " +
                             std::to_string(pair_slots.size()) + " labels");
        }
        const auto labels = enumerate_pairs(n);
        for (std::size_t r = 0; r < pair_slots.size(); ++r) {
            const std::string expect =
                "r" + std::to_string(labels[r].hi) + "_" + std::to_string(labels[r].lo);
            if (entities[pair_slots[r]] != expect)
                throw ParseError("pair labels must follow canonical order; expected '" + expect +
                                 "', got '" + entities[pair_slots[r]] + "'");
        }
        traj.kind = TrajectoryKind::relative;
        traj.n = n;
        traj.states = assemble(pair_slots);
        if (com_slot) traj.com = assemble({*com_slot});
        return traj;
    }
    if (com_slot) {
        traj.kind = TrajectoryKind::com_only;
        traj.n = 0;
        traj.states = assemble({*com_slot});
        return traj;
    }
    throw ParseError("trajectory file has no recognizable entities");
}

} // namespace relmotion
