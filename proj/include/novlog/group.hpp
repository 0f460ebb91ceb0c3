#pragma once

// Split extensions G = Z ⋉_rho H with xi(t^n h) = -n. Elements are kept in
// the normal form t^n h; the twist is h t = t rho(h).

#include "errors.hpp"
#include "rational.hpp"

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace novlog {

inline constexpr std::size_t kMaxRank = 4;

/// Element of the kernel H. A finite H stores its element index in c[0];
/// a free abelian H stores exponent vectors.
struct HElem {
    std::array<std::int32_t, kMaxRank> c{};

    static HElem index(std::int32_t i) {
        HElem h;
        h.c[0] = i;
        return h;
    }
    std::int32_t idx() const { return c[0]; }

    auto operator<=>(const HElem &) const = default;
};

struct GroupElement {
    std::int64_t n = 0; // t-exponent
    HElem h;

    auto operator<=>(const GroupElement &) const = default;
};

/// Conjugacy class inside G_(level); the representative is the
/// lexicographically least (n, h) of the orbit.
struct ConjClass {
    std::int64_t level = 0;
    GroupElement rep;

    auto operator<=>(const ConjClass &) const = default;
};

enum class KernelKind { Finite, FreeAbelian };

class TwistedGroup;
using GroupPtr = std::shared_ptr<const TwistedGroup>;

class TwistedGroup {
  public:
    using IntMatrix = std::vector<std::vector<std::int64_t>>;

    /// Finite kernel from a multiplication table (indices) and rho as an
    /// index permutation. Throws std::invalid_argument when the data is not
    /// a group with an automorphism.
    static GroupPtr finite(std::vector<std::string> names,
                           std::vector<std::vector<int>> table, std::vector<int> rho) {
        auto g = std::shared_ptr<TwistedGroup>(new TwistedGroup);
        g->kind_ = KernelKind::Finite;
        g->names_ = std::move(names);
        g->table_ = std::move(table);
        g->rho_ = std::move(rho);
        g->init_finite();
        return g;
    }

    /// H = Z/m written multiplicatively with rho(a^i) = a^(r i).
    static GroupPtr cyclic(int m, int r = 1) {
        if (m < 1)
            throw std::invalid_argument("cyclic group order must be positive");
        std::vector<std::string> names;
        std::vector<std::vector<int>> table(m, std::vector<int>(m));
        std::vector<int> rho(m);
        for (int i = 0; i < m; ++i) {
            names.push_back(i == 0 ? std::string("e") : i == 1 ? std::string("a") : "a" + std::to_string(i));
            for (int j = 0; j < m; ++j)
                table[i][j] = (i + j) % m;
            rho[i] = static_cast<int>(((static_cast<long>(r) * i) % m + m) % m);
        }
        return finite(std::move(names), std::move(table), std::move(rho));
    }

    /// G = Z (trivial kernel).
    static GroupPtr integers() { return cyclic(1); }

    /// H = Z^rank with rho given by an integer matrix (identity when empty).
    static GroupPtr free_abelian(int rank, IntMatrix rho = {}) {
        if (rank < 0 || static_cast<std::size_t>(rank) > kMaxRank)
            throw std::invalid_argument("free abelian rank must be in [0, " +
                                        std::to_string(kMaxRank) + "]");
        auto g = std::shared_ptr<TwistedGroup>(new TwistedGroup);
        g->kind_ = KernelKind::FreeAbelian;
        g->rank_ = rank;
        if (rho.empty()) {
            rho.assign(rank, std::vector<std::int64_t>(rank, 0));
            for (int i = 0; i < rank; ++i)
                rho[i][i] = 1;
        }
        g->rho_matrix_ = std::move(rho);
        g->init_free_abelian();
        return g;
    }

    KernelKind kind() const noexcept { return kind_; }
    bool is_finite() const noexcept { return kind_ == KernelKind::Finite; }
    std::size_t kernel_order() const { return is_finite() ? names_.size() : 0; }
    int rank() const noexcept { return rank_; }
    bool rho_is_identity() const noexcept { return rho_identity_; }

    /// G is abelian iff H is abelian and rho = id.
    bool is_abelian() const noexcept { return h_abelian_ && rho_identity_; }

    HElem identity_h() const { return is_finite() ? HElem::index(identity_) : HElem{}; }
    GroupElement identity() const { return {0, identity_h()}; }
    GroupElement t() const { return {1, identity_h()}; }

    /// All kernel elements; finite kernels only.
    std::vector<HElem> kernel_elements() const {
        require_finite("kernel_elements");
        std::vector<HElem> out;
        for (std::size_t i = 0; i < names_.size(); ++i)
            out.push_back(HElem::index(static_cast<std::int32_t>(i)));
        return out;
    }

    bool is_valid(const HElem &h) const {
        if (is_finite())
            return h.idx() >= 0 && static_cast<std::size_t>(h.idx()) < names_.size() &&
                   std::all_of(h.c.begin() + 1, h.c.end(), [](auto v) { return v == 0; });
        for (std::size_t i = rank_; i < kMaxRank; ++i)
            if (h.c[i] != 0)
                return false;
        return true;
    }

    HElem h_mul(const HElem &a, const HElem &b) const {
        if (is_finite())
            return HElem::index(table_[a.idx()][b.idx()]);
        HElem out;
        for (int i = 0; i < rank_; ++i)
            out.c[i] = a.c[i] + b.c[i];
        return out;
    }

    HElem h_inv(const HElem &a) const {
        if (is_finite())
            return HElem::index(inverse_[a.idx()]);
        HElem out;
        for (int i = 0; i < rank_; ++i)
            out.c[i] = -a.c[i];
        return out;
    }

    /// rho^n(h), n of either sign.
    HElem rho_pow(const HElem &h, std::int64_t n) const {
        if (rho_identity_ || n == 0)
            return h;
        if (is_finite())
            return HElem::index(rho_powers_[mod_order(n)][h.idx()]);
        const IntMatrix &m = n > 0 ? rho_matrix_ : rho_inverse_;
        HElem out = h;
        for (std::int64_t step = 0; step < (n > 0 ? n : -n); ++step) {
            HElem next;
            for (int i = 0; i < rank_; ++i) {
                std::int64_t acc = 0;
                for (int j = 0; j < rank_; ++j)
                    acc += m[i][j] * out.c[j];
                next.c[i] = static_cast<std::int32_t>(acc);
            }
            out = next;
        }
        return out;
    }

    /// (t^n1 h1)(t^n2 h2) = t^(n1+n2) rho^n2(h1) h2.
    GroupElement mul(const GroupElement &a, const GroupElement &b) const {
        return {a.n + b.n, h_mul(rho_pow(a.h, b.n), b.h)};
    }

    GroupElement inv(const GroupElement &g) const { return {-g.n, rho_pow(h_inv(g.h), -g.n)}; }

    static std::int64_t xi(const GroupElement &g) { return -g.n; }

    ConjClass conj_class(const GroupElement &g) const {
        if (is_finite())
            return {-g.n, {g.n, HElem::index(class_rep_[mod_order(g.n)][g.h.idx()])}};
        if (!rho_identity_)
            throw Error(ErrorKind::UnsupportedGroup,
                        "conjugacy classes over a free abelian kernel need rho = id");
        return {-g.n, g};
    }

    /// Complete, sorted list of classes in G_(level).
    std::vector<ConjClass> classes_at_level(std::int64_t level) const {
        if (!is_finite())
            throw Error(ErrorKind::UnsupportedGroup, "class enumeration needs a finite kernel");
        const auto &reps = class_rep_[mod_order(-level)];
        std::vector<int> distinct(reps.begin(), reps.end());
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        std::vector<ConjClass> out;
        for (int r : distinct)
            out.push_back({level, {-level, HElem::index(r)}});
        return out;
    }

    /// Number of kernel elements h with t^n h in the class.
    std::size_t class_size(const ConjClass &c) const {
        if (!is_finite())
            return 1;
        const auto &reps = class_rep_[mod_order(c.rep.n)];
        return static_cast<std::size_t>(std::count(reps.begin(), reps.end(), c.rep.h.idx()));
    }

    std::string h_name(const HElem &h) const {
        if (is_finite())
            return names_.at(h.idx());
        bool zero = true;
        for (int i = 0; i < rank_; ++i)
            zero = zero && h.c[i] == 0;
        if (zero)
            return "e";
        std::string s = "(";
        for (int i = 0; i < rank_; ++i) {
            if (i)
                s += ",";
            s += std::to_string(h.c[i]);
        }
        return s + ")";
    }

    std::optional<HElem> parse_h(const std::string &name) const {
        if (is_finite()) {
            auto it = std::find(names_.begin(), names_.end(), name);
            if (it == names_.end())
                return std::nullopt;
            return HElem::index(static_cast<std::int32_t>(it - names_.begin()));
        }
        if (name == "e")
            return HElem{};
        if (name.size() < 2 || name.front() != '(' || name.back() != ')')
            return std::nullopt;
        HElem h;
        std::string body = name.substr(1, name.size() - 2);
        int i = 0;
        std::size_t pos = 0;
        while (pos <= body.size() && !body.empty()) {
            std::size_t comma = body.find(',', pos);
            std::string part = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            if (i >= rank_)
                return std::nullopt;
            try {
                std::size_t used = 0;
                long v = std::stol(part, &used);
                if (used != part.size())
                    return std::nullopt;
                h.c[i++] = static_cast<std::int32_t>(v);
            } catch (const std::exception &) {
                return std::nullopt;
            }
            if (comma == std::string::npos)
                break;
            pos = comma + 1;
        }
        if (i != rank_)
            return std::nullopt;
        return h;
    }

    const std::vector<std::string> &names() const { return names_; }
    const std::vector<std::vector<int>> &table() const { return table_; }
    const std::vector<int> &rho_permutation() const { return rho_; }
    const IntMatrix &rho_matrix() const { return rho_matrix_; }

  private:
    TwistedGroup() = default;

    void require_finite(const char *what) const {
        if (!is_finite())
            throw Error(ErrorKind::UnsupportedGroup, std::string(what) + " needs a finite kernel");
    }

    std::size_t mod_order(std::int64_t n) const {
        const auto ord = static_cast<std::int64_t>(rho_powers_.size());
        return static_cast<std::size_t>(((n % ord) + ord) % ord);
    }

    void init_finite() {
        const std::size_t n = names_.size();
        if (n == 0)
            throw std::invalid_argument("kernel must have at least one element");
        if (table_.size() != n)
            throw std::invalid_argument("multiplication table must be |H| x |H|");
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j)
                if (names_[i] == names_[j])
                    throw std::invalid_argument("duplicate element name '" + names_[i] + "'");
            if (table_[i].size() != n)
                throw std::invalid_argument("multiplication table must be |H| x |H|");
            for (int v : table_[i])
                if (v < 0 || static_cast<std::size_t>(v) >= n)
                    throw std::invalid_argument("multiplication table entry out of range");
        }
        identity_ = -1;
        for (std::size_t e = 0; e < n && identity_ < 0; ++e) {
            bool ok = true;
            for (std::size_t x = 0; x < n && ok; ++x)
                ok = table_[e][x] == static_cast<int>(x) && table_[x][e] == static_cast<int>(x);
            if (ok)
                identity_ = static_cast<int>(e);
        }
        if (identity_ < 0)
            throw std::invalid_argument("multiplication table has no identity");
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c)
                    if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
                        throw std::invalid_argument("multiplication table is not associative");
        inverse_.assign(n, -1);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (table_[a][b] == identity_)
                    inverse_[a] = static_cast<int>(b);
        for (int v : inverse_)
            if (v < 0)
                throw std::invalid_argument("multiplication table has an element without inverse");
        h_abelian_ = true;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                h_abelian_ = h_abelian_ && table_[a][b] == table_[b][a];

        if (rho_.size() != n)
            throw std::invalid_argument("rho must be a permutation of the |H| elements");
        std::vector<int> seen(n, 0);
        for (int v : rho_) {
            if (v < 0 || static_cast<std::size_t>(v) >= n || seen[v]++)
                throw std::invalid_argument("rho must be a permutation of the |H| elements");
        }
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (rho_[table_[a][b]] != table_[rho_[a]][rho_[b]])
                    throw std::invalid_argument("rho is not multiplicative");

        std::vector<int> id(n);
        std::iota(id.begin(), id.end(), 0);
        rho_powers_.push_back(id);
        for (;;) {
            std::vector<int> next(n);
            for (std::size_t i = 0; i < n; ++i)
                next[i] = rho_[rho_powers_.back()[i]];
            if (next == id)
                break;
            rho_powers_.push_back(std::move(next));
        }
        rho_identity_ = rho_powers_.size() == 1;

        // Orbits of h under h -> rho^n(k) h k^-1 and h -> rho(h), per n mod ord(rho).
        for (std::size_t r = 0; r < rho_powers_.size(); ++r) {
            std::vector<int> parent(n);
            std::iota(parent.begin(), parent.end(), 0);
            auto find = [&](int x) {
                while (parent[x] != x)
                    x = parent[x] = parent[parent[x]];
                return x;
            };
            auto unite = [&](int a, int b) {
                a = find(a);
                b = find(b);
                if (a != b)
                    parent[std::max(a, b)] = std::min(a, b);
            };
            for (std::size_t h = 0; h < n; ++h) {
                unite(static_cast<int>(h), rho_[h]);
                for (std::size_t k = 0; k < n; ++k)
                    unite(static_cast<int>(h), table_[table_[rho_powers_[r][k]][h]][inverse_[k]]);
            }
            std::vector<int> rep(n);
            for (std::size_t h = 0; h < n; ++h)
                rep[h] = find(static_cast<int>(h));
            class_rep_.push_back(std::move(rep));
        }
    }

    void init_free_abelian() {
        const int r = rank_;
        if (static_cast<int>(rho_matrix_.size()) != r)
            throw std::invalid_argument("rho must be a rank x rank integer matrix");
        for (const auto &row : rho_matrix_)
            if (static_cast<int>(row.size()) != r)
                throw std::invalid_argument("rho must be a rank x rank integer matrix");
        // Invert over Q, then demand an integral inverse (rho in GL_r(Z)).
        std::vector<std::vector<std::int64_t>> inv(r, std::vector<std::int64_t>(r, 0));
        {
            std::vector<std::vector<mpq_class>> a(r, std::vector<mpq_class>(2 * r));
            for (int i = 0; i < r; ++i) {
                for (int j = 0; j < r; ++j)
                    a[i][j] = static_cast<long>(rho_matrix_[i][j]);
                a[i][r + i] = 1;
            }
            for (int col = 0; col < r; ++col) {
                int p = col;
                while (p < r && a[p][col] == 0)
                    ++p;
                if (p == r)
                    throw std::invalid_argument("rho is not invertible");
                std::swap(a[p], a[col]);
                mpq_class s = 1 / a[col][col];
                for (auto &v : a[col])
                    v *= s;
                for (int i = 0; i < r; ++i) {
                    if (i == col || a[i][col] == 0)
                        continue;
                    mpq_class f = a[i][col];
                    for (int j = 0; j < 2 * r; ++j)
                        a[i][j] -= f * a[col][j];
                }
            }
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j) {
                    const mpq_class &v = a[i][r + j];
                    if (v.get_den() != 1)
                        throw std::invalid_argument("rho is not invertible over Z");
                    inv[i][j] = v.get_num().get_si();
                }
        }
        rho_inverse_ = std::move(inv);
        rho_identity_ = true;
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j)
                rho_identity_ = rho_identity_ && rho_matrix_[i][j] == (i == j ? 1 : 0);
        h_abelian_ = true;
        rho_powers_.assign(1, {});
    }

    KernelKind kind_ = KernelKind::Finite;
    // finite kernel
    std::vector<std::string> names_;
    std::vector<std::vector<int>> table_;
    std::vector<int> rho_;
    std::vector<int> inverse_;
    int identity_ = 0;
    std::vector<std::vector<int>> rho_powers_;
    std::vector<std::vector<int>> class_rep_;
    // free abelian kernel
    int rank_ = 0;
    IntMatrix rho_matrix_;
    IntMatrix rho_inverse_;

    bool rho_identity_ = true;
    bool h_abelian_ = true;
};

} // namespace novlog
