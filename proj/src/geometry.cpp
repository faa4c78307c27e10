#include "atilde/geometry.hpp"

#include "atilde/errors.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace atilde {

namespace {

using Matrix = std::vector<std::vector<std::uint8_t>>;

void require_same(const Subspace& x, const Subspace& y) {
    if (&x.geometry() != &y.geometry())
        throw std::invalid_argument("subspaces belong to different geometries");
}

Matrix rows_of(const Geometry& g, int id) {
    const int cols = g.ambient_dim();
    auto flat = g.basis(id);
    Matrix rows(g.dim(id), std::vector<std::uint8_t>(cols));
    for (int r = 0; r < g.dim(id); ++r)
        for (int c = 0; c < cols; ++c) rows[r][c] = flat[r * cols + c];
    return rows;
}

std::vector<std::uint8_t> flatten(const Matrix& rows) {
    std::vector<std::uint8_t> out;
    for (const auto& r : rows) out.insert(out.end(), r.begin(), r.end());
    return out;
}

// Basis of {y : row·y = 0 for every row}, rows already in reduced echelon form.
Matrix null_space(const GaloisField& f, const Matrix& rref_rows, int cols) {
    std::vector<int> pivot_of_row;
    std::vector<bool> is_pivot(cols, false);
    for (const auto& row : rref_rows) {
        int c = 0;
        while (row[c] == 0) ++c;
        pivot_of_row.push_back(c);
        is_pivot[c] = true;
    }
    Matrix out;
    for (int free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<std::uint8_t> v(cols, 0);
        v[free] = 1;
        for (std::size_t r = 0; r < rref_rows.size(); ++r) v[pivot_of_row[r]] = f.neg(rref_rows[r][free]);
        out.push_back(std::move(v));
    }
    return out;
}

Matrix mat_vec_rows(const GaloisField& f, const Matrix& a, const Matrix& rows) {
    // each row is a vector v; returns the vectors a·v
    Matrix out;
    for (const auto& v : rows) {
        std::vector<std::uint8_t> w(a.size(), 0);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < v.size(); ++j) w[i] = f.add(w[i], f.mul(a[i][j], v[j]));
        out.push_back(std::move(w));
    }
    return out;
}

int to_int(const std::string& tok, int line) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(tok, &pos);
        if (pos != tok.size()) throw ParseError("expected integer, got '" + tok + "'", line);
        return v;
    } catch (const std::logic_error&) {
        throw ParseError("expected integer, got '" + tok + "'", line);
    }
}

}  // namespace

int rref(const GaloisField& f, std::vector<std::vector<std::uint8_t>>& rows) {
    if (rows.empty()) return 0;
    const std::size_t cols = rows[0].size();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        const auto scale = f.inv(rows[rank][c]);
        for (auto& e : rows[rank]) e = f.mul(e, scale);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][c] == 0) continue;
            const auto factor = rows[r][c];
            for (std::size_t k = 0; k < cols; ++k) rows[r][k] = f.sub(rows[r][k], f.mul(factor, rows[rank][k]));
        }
        ++rank;
    }
    rows.resize(rank);
    return static_cast<int>(rank);
}

// ---------------------------------------------------------------------------

Subspace::Subspace(const Geometry& geometry, int id) : geometry_(&geometry), id_(id) {
    if (id < 0 || id >= geometry.size())
        throw std::out_of_range("subspace id " + std::to_string(id) + " out of range");
}

int Subspace::dim() const { return geometry_->dim(id_); }
std::span<const std::uint8_t> Subspace::basis() const { return geometry_->basis(id_); }

// ---------------------------------------------------------------------------

Geometry::Geometry(int n, const FieldSpec& field) : n_(n), field_(field) {}

std::shared_ptr<const Geometry> Geometry::enumerate(int n, const FieldSpec& field) {
    if (n < 2) throw ValidationError("geometry dimension n must be at least 2, got " + std::to_string(n));
    std::shared_ptr<Geometry> g(new Geometry(n, field));
    const int cols = n + 1;
    const int q = g->q();

    for (int k = 1; k <= n; ++k) {
        std::vector<std::vector<std::uint8_t>> of_dim;
        // pivot column sets as increasing k-subsets of 0..n
        std::vector<int> piv(k);
        for (int i = 0; i < k; ++i) piv[i] = i;
        while (true) {
            std::vector<std::pair<int, int>> free_slots;
            std::vector<bool> is_pivot(cols, false);
            for (int c : piv) is_pivot[c] = true;
            for (int r = 0; r < k; ++r)
                for (int c = piv[r] + 1; c < cols; ++c)
                    if (!is_pivot[c]) free_slots.emplace_back(r, c);
            std::vector<int> digits(free_slots.size(), 0);
            while (true) {
                std::vector<std::uint8_t> flat(k * cols, 0);
                for (int r = 0; r < k; ++r) flat[r * cols + piv[r]] = 1;
                for (std::size_t s = 0; s < free_slots.size(); ++s)
                    flat[free_slots[s].first * cols + free_slots[s].second] = static_cast<std::uint8_t>(digits[s]);
                of_dim.push_back(std::move(flat));
                std::size_t s = 0;
                while (s < digits.size() && ++digits[s] == q) digits[s++] = 0;
                if (s == digits.size()) break;
            }
            int i = k - 1;
            while (i >= 0 && piv[i] == cols - k + i) --i;
            if (i < 0) break;
            ++piv[i];
            for (int j = i + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
        }
        std::sort(of_dim.begin(), of_dim.end());
        for (auto& b : of_dim) {
            g->index_.emplace(b, static_cast<int>(g->dims_.size()));
            g->dims_.push_back(k);
            g->bases_.push_back(std::move(b));
        }
    }

    const int size = g->size();
    g->join_.assign(size * size, kFull);
    g->relation_.assign(size * size, Relation::Skew);
    for (int a = 0; a < size; ++a) {
        for (int b = a; b < size; ++b) {
            Matrix rows = rows_of(*g, a);
            Matrix rb = rows_of(*g, b);
            rows.insert(rows.end(), rb.begin(), rb.end());
            const int j = g->span_of(rows);
            g->join_[a * size + b] = j;
            g->join_[b * size + a] = j;
        }
    }
    for (int a = 0; a < size; ++a) {
        for (int b = 0; b < size; ++b) {
            const int j = g->join_[a * size + b];
            Relation rel;
            if (a == b) rel = Relation::Equal;
            else if (j == kFull) rel = Relation::SpanFull;
            else if (j == a) rel = Relation::Contains;
            else if (j == b) rel = Relation::ContainedIn;
            else rel = Relation::Skew;
            g->relation_[a * size + b] = rel;
        }
    }
    g->perp_.resize(size);
    for (int a = 0; a < size; ++a) {
        const Matrix ns = null_space(g->field_, rows_of(*g, a), cols);
        g->perp_[a] = g->span_of(ns);
    }
    return g;
}

std::span<const std::uint8_t> Geometry::basis(int id) const { return bases_.at(id); }

Subspace Geometry::subspace(int id) const { return Subspace(*this, id); }

std::vector<Subspace> Geometry::subspaces() const {
    std::vector<Subspace> out;
    out.reserve(size());
    for (int i = 0; i < size(); ++i) out.emplace_back(*this, i);
    return out;
}

int Geometry::span_of(const std::vector<std::vector<std::uint8_t>>& rows) const {
    Matrix m = rows;
    const int rank = rref(field_, m);
    if (rank == 0) throw ValidationError("rows span the zero subspace");
    if (rank == n_ + 1) return kFull;
    auto it = index_.find(flatten(m));
    if (it == index_.end()) throw std::logic_error("echelon basis missing from enumeration");
    return it->second;
}

std::optional<int> Geometry::find(const std::vector<std::uint8_t>& rref_rows) const {
    auto it = index_.find(rref_rows);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

int Geometry::apply(const std::vector<std::vector<std::uint8_t>>& matrix, int id) const {
    return span_of(mat_vec_rows(field_, matrix, rows_of(*this, id)));
}

int Geometry::points_per_line() const {
    int line = -1;
    for (int i = 0; i < size() && line < 0; ++i)
        if (dims_[i] == 2) line = i;
    int count = 0;
    for (int i = 0; i < size(); ++i)
        if (dims_[i] == 1 && contains(line, i)) ++count;
    return count;
}

// ---------------------------------------------------------------------------

Span sum(const Subspace& x, const Subspace& y) {
    require_same(x, y);
    const int j = x.geometry().join(x.id(), y.id());
    if (j == Geometry::kFull) return FullSpace{};
    return x.geometry().subspace(j);
}

Incidence incident(const Subspace& x, const Subspace& y) {
    require_same(x, y);
    const Geometry& g = x.geometry();
    Incidence out;
    const bool y_in_x = g.contains(x.id(), y.id());
    const bool x_in_y = g.contains(y.id(), x.id());
    out.incident = y_in_x || x_in_y;
    out.x_strictly_in_y = x_in_y && x.id() != y.id();
    out.y_strictly_in_x = y_in_x && x.id() != y.id();
    return out;
}

std::optional<Span> prime_sum(const Subspace& x, const Subspace& y) {
    require_same(x, y);
    if (x.id() == y.id() || incident(x, y).incident) return std::nullopt;
    return sum(x, y);
}

// ---------------------------------------------------------------------------

Correlation Correlation::from_permutation(const Geometry& g, std::vector<int> map) {
    const int size = g.size();
    if (static_cast<int>(map.size()) != size)
        throw ValidationError("lambda must map all " + std::to_string(size) + " subspaces");
    for (int i = 0; i < size; ++i) {
        const int j = map[i];
        if (j < 0 || j >= size)
            throw ValidationError("lambda pair " + std::to_string(i) + " " + std::to_string(j) + ": id out of range");
        if (map[j] != i)
            throw ValidationError("lambda pair " + std::to_string(i) + " " + std::to_string(j) +
                                  " is not an involution (lambda(" + std::to_string(j) + ") = " +
                                  std::to_string(map[j]) + ")");
        if (g.dim(j) != g.n() + 1 - g.dim(i))
            throw ValidationError("lambda pair " + std::to_string(i) + " " + std::to_string(j) +
                                  " does not reverse dimension");
    }
    return Correlation(g, std::move(map));
}

Subspace Correlation::operator()(const Subspace& x) const {
    if (&x.geometry() != geometry_) throw std::invalid_argument("subspace from a different geometry");
    return geometry_->subspace(map_[x.id()]);
}

bool Correlation::reverses_incidence() const {
    const int size = geometry_->size();
    for (int x = 0; x < size; ++x)
        for (int y = 0; y < size; ++y)
            if (geometry_->contains(x, y) && !geometry_->contains(map_[y], map_[x])) return false;
    return true;
}

bool Correlation::is_perp() const {
    for (int i = 0; i < geometry_->size(); ++i)
        if (map_[i] != geometry_->perp(i)) return false;
    return true;
}

Correlation perp_correlation(const Geometry& g) {
    std::vector<int> map(g.size());
    for (int i = 0; i < g.size(); ++i) map[i] = g.perp(i);
    return Correlation::from_permutation(g, std::move(map));
}

Correlation singer_correlation(const Geometry& g) {
    if (g.n() != 2) throw ValidationError("Singer correlation is defined for n = 2 only");
    const GaloisField& f = g.field();
    const int q = g.q();
    const int points = q * q + q + 1;
    // companion matrix of x^3 + a2 x^2 + a1 x + a0: multiplication by a root α in
    // the basis 1, α, α²
    for (int code = 0; code < q * q * q; ++code) {
        const auto a0 = static_cast<std::uint8_t>(code % q);
        const auto a1 = static_cast<std::uint8_t>(code / q % q);
        const auto a2 = static_cast<std::uint8_t>(code / (q * q));
        if (a0 == 0) continue;
        const Matrix c{{0, 0, f.neg(a0)}, {1, 0, f.neg(a1)}, {0, 1, f.neg(a2)}};
        std::vector<int> orbit;
        int p = g.span_of({{1, 0, 0}});
        const int start = p;
        do {
            orbit.push_back(p);
            p = g.apply(c, p);
        } while (p != start && static_cast<int>(orbit.size()) <= points);
        if (static_cast<int>(orbit.size()) != points) continue;

        // trace functional t(v) = Σ v_k·tr(C^k)
        std::vector<std::uint8_t> tr(3);
        Matrix power{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        for (int k = 0; k < 3; ++k) {
            std::uint8_t t = 0;
            for (int i = 0; i < 3; ++i) t = f.add(t, power[i][i]);
            tr[k] = t;
            Matrix next(3, std::vector<std::uint8_t>(3, 0));
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    for (int l = 0; l < 3; ++l) next[i][j] = f.add(next[i][j], f.mul(c[i][l], power[l][j]));
            power = std::move(next);
        }
        Matrix functional{tr};
        rref(f, functional);
        int line = g.span_of(null_space(f, functional, 3));

        std::vector<int> map(g.size(), -1);
        for (int i = 0; i < points; ++i) {
            map[orbit[i]] = line;
            map[line] = orbit[i];
            line = g.apply(c, line);
        }
        return Correlation::from_permutation(g, std::move(map));
    }
    throw std::logic_error("no Singer cycle found");
}

// ---------------------------------------------------------------------------

bool LineReader::next(std::vector<std::string>& tokens) {
    if (pushed_back_) {
        pushed_back_ = false;
        tokens = last_;
        return true;
    }
    std::string raw;
    while (std::getline(in_, raw)) {
        ++line_;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream ss(raw);
        tokens.clear();
        for (std::string tok; ss >> tok;) tokens.push_back(tok);
        if (!tokens.empty()) {
            last_ = tokens;
            return true;
        }
    }
    return false;
}

GeometrySpec read_geometry_spec(LineReader& reader) {
    std::vector<std::string> tok;
    if (!reader.next(tok)) throw ParseError("empty input, expected 'geometry n q'", reader.line());
    if (tok.size() != 3 || tok[0] != "geometry")
        throw ParseError("expected 'geometry n q'", reader.line());
    GeometrySpec spec;
    spec.n = to_int(tok[1], reader.line());
    const int q = to_int(tok[2], reader.line());
    if (spec.n < 2) throw ParseError("n must be at least 2", reader.line());
    std::pair<int, int> pe;
    try {
        pe = prime_power(q);
    } catch (const ValidationError& e) {
        throw ParseError(e.what(), reader.line());
    }

    bool have_modulus = false;
    while (reader.next(tok)) {
        if (tok[0] == "modulus") {
            std::vector<int> coeffs;
            for (std::size_t i = 1; i < tok.size(); ++i) coeffs.push_back(to_int(tok[i], reader.line()));
            try {
                spec.field = FieldSpec::with_modulus(q, coeffs);
            } catch (const ValidationError& e) {
                throw ParseError(e.what(), reader.line());
            }
            have_modulus = true;
        } else if (tok[0] == "lambda") {
            if (tok.size() != 2) throw ParseError("expected 'lambda perp|singer|perm'", reader.line());
            if (tok[1] == "perp") {
                spec.lambda = GeometrySpec::Lambda::Perp;
            } else if (tok[1] == "singer") {
                spec.lambda = GeometrySpec::Lambda::Singer;
            } else if (tok[1] == "perm") {
                spec.lambda = GeometrySpec::Lambda::Perm;
                std::vector<std::pair<int, int>> pairs;
                const int block_line = reader.line();
                while (reader.next(tok)) {
                    if (tok.size() != 2 || !std::isdigit(static_cast<unsigned char>(tok[0][0]))) {
                        reader.unread();
                        break;
                    }
                    pairs.emplace_back(to_int(tok[0], reader.line()), to_int(tok[1], reader.line()));
                }
                int max_id = -1;
                for (auto [i, j] : pairs) max_id = std::max({max_id, i, j});
                spec.lambda_map.assign(max_id + 1, -1);
                for (auto [i, j] : pairs) {
                    if (i < 0 || j < 0) throw ParseError("negative id in lambda block", block_line);
                    if (spec.lambda_map[i] != -1 && spec.lambda_map[i] != j)
                        throw ParseError("lambda maps " + std::to_string(i) + " twice", block_line);
                    spec.lambda_map[i] = j;
                }
            } else {
                throw ParseError("unknown lambda kind '" + tok[1] + "'", reader.line());
            }
        } else {
            reader.unread();
            break;
        }
    }
    if (!have_modulus) {
        if (pe.second > 1 && q != 4 && q != 8 && q != 9)
            throw ParseError("q = " + std::to_string(q) + " needs a 'modulus' line", 1);
        spec.field = FieldSpec::for_order(q);
    }
    return spec;
}

GeometrySpec read_geometry_spec(std::istream& in) {
    LineReader reader(in);
    return read_geometry_spec(reader);
}

std::pair<std::shared_ptr<const Geometry>, Correlation> realize(const GeometrySpec& spec) {
    auto g = Geometry::enumerate(spec.n, spec.field);
    if (spec.lambda == GeometrySpec::Lambda::Perp) return {g, perp_correlation(*g)};
    if (spec.lambda == GeometrySpec::Lambda::Singer) return {g, singer_correlation(*g)};
    std::vector<int> map = spec.lambda_map;
    if (static_cast<int>(map.size()) > g->size())
        throw ValidationError("lambda block mentions id " + std::to_string(map.size() - 1) +
                              " but the geometry has " + std::to_string(g->size()) + " subspaces");
    map.resize(g->size(), -1);
    for (int i = 0; i < g->size(); ++i)
        if (map[i] < 0) throw ValidationError("lambda block does not map id " + std::to_string(i));
    auto lambda = Correlation::from_permutation(*g, std::move(map));
    return {g, lambda};
}

void write_geometry_header(std::ostream& out, const Geometry& g, const Correlation& lambda) {
    const FieldSpec& f = g.field().spec();
    out << "geometry " << g.n() << ' ' << g.q() << '\n';
    if (f.e > 1) {
        out << "modulus";
        for (int c : f.modulus) out << ' ' << c;
        out << '\n';
    }
    if (lambda.is_perp()) {
        out << "lambda perp\n";
    } else {
        out << "lambda perm\n";
        for (int i = 0; i < g.size(); ++i) out << i << ' ' << lambda(i) << '\n';
    }
}

void write_geometry_listing(std::ostream& out, const Geometry& g) {
    const int cols = g.ambient_dim();
    for (int i = 0; i < g.size(); ++i) {
        out << "# " << i << ' ' << g.dim(i) << " :";
        auto b = g.basis(i);
        for (int r = 0; r < g.dim(i); ++r) {
            out << (r == 0 ? " " : " | ");
            for (int c = 0; c < cols; ++c) out << (c ? " " : "") << int(b[r * cols + c]);
        }
        out << '\n';
    }
}

}  // namespace atilde
