#include "scrollcount/notation.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace scrollcount {

namespace {

// Cursor over the notation text that reports positions in error messages.
class Scanner {
public:
    explicit Scanner(const std::string& text) : text_(text) {}

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    [[noreturn]] void fail(const std::string& expected) const {
        std::ostringstream os;
        os << "expected " << expected << " at position " << pos_ << " in \"" << text_
           << "\"";
        throw InvalidConditionError(os.str());
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("'") + c + "'");
        ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    int integer(const std::string& what) {
        skip_ws();
        size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (pos_ == start) fail(what + " (a non-negative integer)");
        long v = 0;
        for (size_t i = start; i < pos_; ++i) {
            v = v * 10 + (text_[i] - '0');
            if (v > 1000000) fail(what + " (value out of range)");
        }
        return static_cast<int>(v);
    }

    void expect_end() {
        skip_ws();
        if (pos_ != text_.size()) fail("end of input");
    }

    size_t pos() const { return pos_; }

private:
    const std::string& text_;
    size_t pos_ = 0;
};

} // namespace

IncidenceProblem parse_problem(const std::string& text) {
    Scanner sc(text);
    sc.skip_ws();
    if (!sc.peek('n')) sc.fail("'n'");
    sc.expect('n');
    sc.expect('(');
    const int N = sc.integer("the ambient dimension N");
    sc.expect(';');
    const int k = sc.integer("the bidegree k");
    sc.expect(',');
    const int l = sc.integer("the bidegree l");
    sc.expect(';');
    std::vector<int> counts;
    counts.push_back(sc.integer("a condition count"));
    while (sc.peek(',')) {
        sc.expect(',');
        counts.push_back(sc.integer("a condition count"));
    }
    sc.expect(')');
    sc.expect_end();

    IncidenceProblem problem = IncidenceProblem::from_counts(N, k, l, counts);
    if (!is_enumerative(problem)) {
        std::ostringstream os;
        os << "condition dimensions do not cut the family to points: expected "
              "condition sum "
           << scroll_family_dim(problem.spec) << ", got " << condition_sum(problem)
           << " in \"" << text << "\"";
        throw DimensionError(os.str());
    }
    return problem;
}

std::string render_problem(const IncidenceProblem& problem) {
    std::vector<int> counts = problem.to_counts();
    // Pad through the deepest non-vacuous condition dimension (N-3).
    const size_t span = static_cast<size_t>(std::max(problem.spec.N - 2, 1));
    if (counts.size() < span) counts.resize(span, 0);
    std::ostringstream os;
    os << "n(" << problem.spec.N << ";" << problem.spec.k << "," << problem.spec.l
       << ";";
    for (size_t j = 0; j < counts.size(); ++j) {
        if (j) os << ",";
        os << counts[j];
    }
    os << ")";
    return os.str();
}

} // namespace scrollcount
