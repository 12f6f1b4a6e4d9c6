#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "handlekit/checked.hpp"

namespace hk {

struct move_error : std::runtime_error {
    explicit move_error(const std::string& what) : std::runtime_error(what) {}
};

enum class ComponentKind { TwoHandle, DottedOneHandle };

// The algebraic shadow of a handle diagram: a symmetric integer linking
// matrix, one row per link component, plus a 3-handle counter. Diagonal
// entries are framings for 2-handle rows and 0 for dotted rows.
class FramedLink {
  public:
    FramedLink() = default;

    std::size_t size() const { return kinds_.size(); }
    ComponentKind kind(std::size_t i) const { return kinds_.at(i); }
    bool is_two_handle(std::size_t i) const { return kind(i) == ComponentKind::TwoHandle; }
    bool is_dotted(std::size_t i) const { return kind(i) == ComponentKind::DottedOneHandle; }

    std::int64_t framing(std::size_t i) const {
        check_index(i);
        return lk_[i * size() + i];
    }

    std::int64_t linking(std::size_t i, std::size_t j) const {
        check_index(i);
        check_index(j);
        return lk_[i * size() + j];
    }

    std::size_t three_handles() const { return three_handles_; }
    void set_three_handles(std::size_t c) { three_handles_ = c; }

    const std::string& label(std::size_t i) const {
        check_index(i);
        return labels_[i];
    }
    void set_label(std::size_t i, std::string s) {
        check_index(i);
        labels_[i] = std::move(s);
    }
    // Index of the component with the given label, if unique and present.
    std::optional<std::size_t> find_label(const std::string& s) const {
        std::optional<std::size_t> hit;
        for (std::size_t i = 0; i < size(); ++i)
            if (labels_[i] == s) {
                if (hit) return std::nullopt;
                hit = i;
            }
        return hit;
    }

    std::size_t add_two_handle(std::int64_t framing, std::string label = {}) {
        std::size_t i = append(ComponentKind::TwoHandle, std::move(label));
        lk_[i * size() + i] = framing;
        return i;
    }

    std::size_t add_dotted(std::string label = {}) {
        return append(ComponentKind::DottedOneHandle, std::move(label));
    }

    void set_framing(std::size_t i, std::int64_t f) {
        check_index(i);
        if (!is_two_handle(i)) throw move_error("set_framing: component " + std::to_string(i) + " is dotted");
        lk_[i * size() + i] = f;
    }

    void set_linking(std::size_t i, std::size_t j, std::int64_t v) {
        check_index(i);
        check_index(j);
        if (i == j) throw move_error("set_linking: use set_framing for diagonal entries");
        if (is_dotted(i) && is_dotted(j) && v != 0)
            throw move_error("set_linking: dotted-dotted linking must be 0");
        lk_[i * size() + j] = v;
        lk_[j * size() + i] = v;
    }

    std::size_t count_dotted() const {
        std::size_t c = 0;
        for (auto k : kinds_)
            if (k == ComponentKind::DottedOneHandle) ++c;
        return c;
    }

    // Indices of all TwoHandle components, in order.
    std::vector<std::size_t> two_handle_indices() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < size(); ++i)
            if (is_two_handle(i)) out.push_back(i);
        return out;
    }

    void remove_components(std::vector<std::size_t> idx) {
        std::sort(idx.begin(), idx.end());
        idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
        for (auto i : idx) check_index(i);
        std::vector<std::size_t> keep;
        for (std::size_t i = 0; i < size(); ++i)
            if (!std::binary_search(idx.begin(), idx.end(), i)) keep.push_back(i);
        *this = restricted_to(keep);
    }

    FramedLink restricted_to(const std::vector<std::size_t>& keep) const {
        FramedLink out;
        out.three_handles_ = three_handles_;
        for (auto i : keep) {
            check_index(i);
            out.append(kinds_[i], labels_[i]);
        }
        std::size_t m = keep.size();
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b) out.lk_[a * m + b] = lk_[keep[a] * size() + keep[b]];
        return out;
    }

    bool operator==(const FramedLink& o) const {
        return kinds_ == o.kinds_ && lk_ == o.lk_ && three_handles_ == o.three_handles_;
    }

    void check_index(std::size_t i) const {
        if (i >= size()) throw move_error("component index " + std::to_string(i) + " out of range");
    }

  private:
    std::size_t append(ComponentKind k, std::string label) {
        std::size_t n = size();
        std::vector<std::int64_t> nl((n + 1) * (n + 1), 0);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) nl[a * (n + 1) + b] = lk_[a * n + b];
        lk_ = std::move(nl);
        kinds_.push_back(k);
        labels_.push_back(std::move(label));
        return n;
    }

    std::vector<ComponentKind> kinds_;
    std::vector<std::int64_t> lk_;  // full symmetric matrix, row-major
    std::vector<std::string> labels_;
    std::size_t three_handles_ = 0;
};

// ---------------------------------------------------------------------------
// Moves

struct SlideMove {
    std::size_t rider;
    std::size_t over;
    int sign;  // +1 handle addition, -1 handle subtraction
};

struct AddCancelingPairMove {};

struct Cancel12Move {
    std::size_t dotted;
    std::size_t handle;
};

struct BlowUpMove {
    int sign;  // framing of the new split unknot, +1 or -1
};

struct BlowDownMove {
    std::size_t index;
};

struct SelectSublinkMove {
    std::vector<std::size_t> keep;
};

using Move =
    std::variant<SlideMove, AddCancelingPairMove, Cancel12Move, BlowUpMove, BlowDownMove, SelectSublinkMove>;

struct MoveScript {
    std::vector<Move> moves;
};

// Handle slide: replace the rider by its band-sum with the over component.
// On the linking matrix this is the congruence E^T L E for the elementary
// unimodular E adding sign*(column over) to column rider. Computed twice
// (entrywise formulas and the rank-1 congruence route) and cross-checked.
inline FramedLink slide(const FramedLink& link, const SlideMove& mv) {
    link.check_index(mv.rider);
    link.check_index(mv.over);
    if (mv.rider == mv.over) throw move_error("slide: rider equals over");
    if (mv.sign != 1 && mv.sign != -1) throw move_error("slide: sign must be +1 or -1");
    if (!link.is_two_handle(mv.rider)) throw move_error("slide: rider is not a 2-handle");
    if (!link.is_two_handle(mv.over)) throw move_error("slide: over is not a 2-handle");

    const std::size_t i = mv.rider, j = mv.over, n = link.size();
    const std::int64_t eps = mv.sign;

    FramedLink out = link;
    // Entrywise formulas.
    out.set_framing(i, ck_add(ck_add(link.framing(i), link.framing(j)),
                              ck_mul(2, ck_mul(eps, link.linking(i, j)))));
    for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        out.set_linking(i, k, ck_add(link.linking(i, k), ck_mul(eps, link.linking(j, k))));
    }
    out.set_linking(i, j, ck_add(link.linking(i, j), ck_mul(eps, link.framing(j))));

    // Congruence route: L <- E^T L E with E = I + eps * e_j e_i^T.
    // L E adds eps*(col j) to col i, then E^T (.) adds eps*(row j) to row i.
    // Only row/column i changes, so the full-matrix reconstruction is gated
    // to small links; above that the congruence is checked on the changed row
    // (the remaining entries are copied, hence equal by construction).
    if (n <= 64) {
        std::vector<std::int64_t> m(n * n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) m[a * n + b] = link.linking(a, b);
        for (std::size_t a = 0; a < n; ++a) m[a * n + i] = ck_add(m[a * n + i], ck_mul(eps, m[a * n + j]));
        for (std::size_t b = 0; b < n; ++b) m[i * n + b] = ck_add(m[i * n + b], ck_mul(eps, m[j * n + b]));
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (m[a * n + b] != out.linking(a, b))
                    throw move_error("slide: E^T L E reconstruction mismatch at (" + std::to_string(a) + "," +
                                     std::to_string(b) + ")");
    } else {
        for (std::size_t b = 0; b < n; ++b) {
            std::int64_t want =
                b == i ? ck_add(ck_add(link.linking(i, i), link.linking(j, j)),
                                ck_mul(2, ck_mul(eps, link.linking(i, j))))
                       : ck_add(link.linking(i, b), ck_mul(eps, link.linking(j, b)));
            if (out.linking(i, b) != want)
                throw move_error("slide: congruence row check mismatch at column " + std::to_string(b));
        }
    }
    return out;
}

// Mint a spare 0-framed 2-handle as half of a 2-/3-canceling pair.
inline FramedLink add_canceling_pair(const FramedLink& link, std::string label = {}) {
    FramedLink out = link;
    out.add_two_handle(0, std::move(label));
    out.set_three_handles(out.three_handles() + 1);
    return out;
}

// 1-/2-cancellation. The dotted component must run over the canceling
// 2-handle algebraically once and over nothing else; residual links must be
// cleared by explicit slides first.
inline FramedLink cancel12(const FramedLink& link, std::size_t dotted, std::size_t handle) {
    link.check_index(dotted);
    link.check_index(handle);
    if (!link.is_dotted(dotted)) throw move_error("cancel12: component " + std::to_string(dotted) + " is not dotted");
    if (!link.is_two_handle(handle))
        throw move_error("cancel12: component " + std::to_string(handle) + " is not a 2-handle");
    std::int64_t l = link.linking(dotted, handle);
    if (l != 1 && l != -1)
        throw move_error("cancel12: |linking(dotted,handle)| = " + std::to_string(l < 0 ? -l : l) + ", need 1");
    for (std::size_t k = 0; k < link.size(); ++k) {
        if (k == dotted || k == handle) continue;
        if (link.linking(dotted, k) != 0)
            throw move_error("cancel12: residual linking with component " + std::to_string(k) + " (" +
                             link.label(k) + ") = " + std::to_string(link.linking(dotted, k)));
    }
    FramedLink out = link;
    out.remove_components({dotted, handle});
    return out;
}

inline FramedLink blow_up(const FramedLink& link, int sign) {
    if (sign != 1 && sign != -1) throw move_error("blow_up: sign must be +1 or -1");
    FramedLink out = link;
    out.add_two_handle(sign);
    return out;
}

inline FramedLink blow_down(const FramedLink& link, std::size_t index) {
    link.check_index(index);
    if (!link.is_two_handle(index)) throw move_error("blow_down: component is not a 2-handle");
    std::int64_t f = link.framing(index);
    if (f != 1 && f != -1) throw move_error("blow_down: framing is " + std::to_string(f) + ", need +1 or -1");
    for (std::size_t k = 0; k < link.size(); ++k)
        if (k != index && link.linking(index, k) != 0)
            throw move_error("blow_down: component still linked with " + std::to_string(k));
    FramedLink out = link;
    out.remove_components({index});
    return out;
}

inline FramedLink select_sublink(const FramedLink& link, const std::vector<std::size_t>& keep) {
    return link.restricted_to(keep);
}

inline FramedLink apply_move(const FramedLink& link, const Move& mv) {
    return std::visit(
        [&](const auto& m) -> FramedLink {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, SlideMove>) return slide(link, m);
            else if constexpr (std::is_same_v<T, AddCancelingPairMove>) return add_canceling_pair(link);
            else if constexpr (std::is_same_v<T, Cancel12Move>) return cancel12(link, m.dotted, m.handle);
            else if constexpr (std::is_same_v<T, BlowUpMove>) return blow_up(link, m.sign);
            else if constexpr (std::is_same_v<T, BlowDownMove>) return blow_down(link, m.index);
            else return select_sublink(link, m.keep);
        },
        mv);
}

// ---------------------------------------------------------------------------
// JSON, schema "flk-1" (links) and "mvs-1" (scripts). Round-trip lossless.

inline nlohmann::json to_json(const FramedLink& link) {
    nlohmann::json comps = nlohmann::json::array();
    for (std::size_t i = 0; i < link.size(); ++i) {
        nlohmann::json c;
        if (link.is_two_handle(i)) {
            c["kind"] = "two_handle";
            c["framing"] = link.framing(i);
        } else {
            c["kind"] = "dotted";
        }
        if (!link.label(i).empty()) c["label"] = link.label(i);
        comps.push_back(c);
    }
    // Row-major lower triangle, diagonal excluded (the diagonal lives in the
    // per-component framing fields).
    nlohmann::json lower = nlohmann::json::array();
    for (std::size_t i = 1; i < link.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) lower.push_back(link.linking(i, j));
    return nlohmann::json{{"schema", "flk-1"},
                          {"components", comps},
                          {"linking", lower},
                          {"three_handles", link.three_handles()}};
}

inline FramedLink link_from_json(const nlohmann::json& j) {
    if (j.at("schema").get<std::string>() != "flk-1") throw move_error("link_from_json: unknown schema");
    FramedLink out;
    for (const auto& c : j.at("components")) {
        std::string kind = c.at("kind").get<std::string>();
        std::string label = c.contains("label") ? c.at("label").get<std::string>() : "";
        if (kind == "two_handle") out.add_two_handle(c.at("framing").get<std::int64_t>(), label);
        else if (kind == "dotted") out.add_dotted(label);
        else throw move_error("link_from_json: unknown component kind " + kind);
    }
    const auto& lower = j.at("linking");
    std::size_t expect = out.size() * (out.size() - 1) / 2;
    if (out.size() == 0) expect = 0;
    if (lower.size() != expect) throw move_error("link_from_json: wrong linking entry count");
    std::size_t t = 0;
    for (std::size_t i = 1; i < out.size(); ++i)
        for (std::size_t jx = 0; jx < i; ++jx) out.set_linking(i, jx, lower[t++].get<std::int64_t>());
    out.set_three_handles(j.at("three_handles").get<std::size_t>());
    return out;
}

inline nlohmann::json to_json(const MoveScript& script) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& mv : script.moves) {
        nlohmann::json m;
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, SlideMove>) {
                    m = {{"op", "slide"}, {"rider", x.rider}, {"over", x.over}, {"sign", x.sign}};
                } else if constexpr (std::is_same_v<T, AddCancelingPairMove>) {
                    m = {{"op", "add_canceling_pair"}};
                } else if constexpr (std::is_same_v<T, Cancel12Move>) {
                    m = {{"op", "cancel12"}, {"dotted", x.dotted}, {"handle", x.handle}};
                } else if constexpr (std::is_same_v<T, BlowUpMove>) {
                    m = {{"op", "blow_up"}, {"sign", x.sign}};
                } else if constexpr (std::is_same_v<T, BlowDownMove>) {
                    m = {{"op", "blow_down"}, {"index", x.index}};
                } else {
                    m = {{"op", "select_sublink"}, {"keep", x.keep}};
                }
            },
            mv);
        arr.push_back(m);
    }
    return nlohmann::json{{"schema", "mvs-1"}, {"moves", arr}};
}

inline MoveScript script_from_json(const nlohmann::json& j) {
    if (j.at("schema").get<std::string>() != "mvs-1") throw move_error("script_from_json: unknown schema");
    MoveScript out;
    for (const auto& m : j.at("moves")) {
        std::string op = m.at("op").get<std::string>();
        if (op == "slide")
            out.moves.push_back(SlideMove{m.at("rider").get<std::size_t>(), m.at("over").get<std::size_t>(),
                                          m.at("sign").get<int>()});
        else if (op == "add_canceling_pair") out.moves.push_back(AddCancelingPairMove{});
        else if (op == "cancel12")
            out.moves.push_back(Cancel12Move{m.at("dotted").get<std::size_t>(), m.at("handle").get<std::size_t>()});
        else if (op == "blow_up") out.moves.push_back(BlowUpMove{m.at("sign").get<int>()});
        else if (op == "blow_down") out.moves.push_back(BlowDownMove{m.at("index").get<std::size_t>()});
        else if (op == "select_sublink")
            out.moves.push_back(SelectSublinkMove{m.at("keep").get<std::vector<std::size_t>>()});
        else throw move_error("script_from_json: unknown op " + op);
    }
    return out;
}

}  // namespace hk
