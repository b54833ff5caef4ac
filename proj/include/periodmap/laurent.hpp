#pragma once

#include <map>

#include "periodmap/series.hpp"

namespace periodmap {

struct NotHomogeneous : EngineError {
    explicit NotHomogeneous(const std::string& msg) : EngineError("NotHomogeneous", msg) {}
};

/* Finite Laurent polynomial in T with values in V.  Canonical: a term is
 * stored only while its value differs from V's default.  V must provide
 * is_zero-style emptiness via the supplied predicate on use sites; for the
 * common module-element case see ArElement below. */
template <typename V>
class LaurentT {
public:
    using Terms = std::map<int, V>;

    LaurentT() = default;

    const Terms& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    const V* term(int k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? nullptr : &it->second;
    }

    template <typename IsZero>
    void set(int k, V value, IsZero&& is_zero) {
        if (is_zero(value))
            terms_.erase(k);
        else
            terms_[k] = std::move(value);
    }

    friend bool operator==(const LaurentT& a, const LaurentT& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const LaurentT& a, const LaurentT& b) { return !(a == b); }

private:
    Terms terms_;
};

}  // namespace periodmap
