#include "billiards/symbolic.hpp"

#include <algorithm>
#include <sstream>

#include "billiards/error.hpp"

namespace billiards {

namespace {

long long mod(long long a, long long m) {
  const long long r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

int Word::cyclic(long long i) const { return symbols[static_cast<std::size_t>(mod(i, size()))]; }

bool operator<(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.symbols < b.symbols;
}

std::string to_string(const Word& w) {
  const bool digits = std::all_of(w.symbols.begin(), w.symbols.end(), [](int s) { return s >= 0 && s < 10; });
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!digits && i > 0) out += '-';
    out += std::to_string(w[i]);
  }
  return out;
}

Word parse_word(const std::string& text) {
  Word w;
  if (text.find('-') != std::string::npos) {
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, '-')) {
      if (tok.empty() || !std::all_of(tok.begin(), tok.end(), ::isdigit))
        throw Error(ErrorKind::InvalidInput, "bad word '" + text + "'");
      w.symbols.push_back(std::stoi(tok));
    }
  } else {
    for (char c : text) {
      if (!std::isdigit(static_cast<unsigned char>(c))) throw Error(ErrorKind::InvalidInput, "bad word '" + text + "'");
      w.symbols.push_back(c - '0');
    }
  }
  if (w.empty()) throw Error(ErrorKind::InvalidInput, "empty word");
  return w;
}

Word concat(const Word& a, const Word& b) {
  Word w = a;
  w.marked = -1;
  w.symbols.insert(w.symbols.end(), b.symbols.begin(), b.symbols.end());
  return w;
}

Word power(const Word& w, int k) {
  Word out;
  for (int i = 0; i < k; ++i) out.symbols.insert(out.symbols.end(), w.symbols.begin(), w.symbols.end());
  return out;
}

Word rotated(const Word& w, int k) {
  Word out;
  const long long n = static_cast<long long>(w.size());
  for (long long i = 0; i < n; ++i) out.symbols.push_back(w.cyclic(i + k));
  return out;
}

Word reversed(const Word& w) {
  Word out = w;
  out.marked = -1;
  std::reverse(out.symbols.begin(), out.symbols.end());
  return out;
}

Word necklace(const Word& w, int* shift) {
  const int n = static_cast<int>(w.size());
  int best = 0;
  for (int k = 1; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      const int a = w.symbols[(k + i) % n], b = w.symbols[(best + i) % n];
      if (a != b) {
        if (a < b) best = k;
        break;
      }
    }
  }
  if (shift) *shift = best;
  return rotated(w, best);
}

bool is_primitive(const Word& w) {
  const std::size_t n = w.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool repeats = true;
    for (std::size_t i = d; i < n && repeats; ++i) repeats = w[i] == w[i - d];
    if (repeats) return false;
  }
  return true;
}

bool is_admissible(const Word& w, bool periodic) {
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i] == w[i - 1]) return false;
  if (periodic && !w.empty() && w.size() >= 1 && w[0] == w[w.size() - 1]) return false;
  return true;
}

PalindromeCheck is_palindromic_at(const Word& window, int center) {
  const int n = static_cast<int>(window.size());
  if (n < 3) throw Error(ErrorKind::InvalidInput, "palindrome window needs at least 3 symbols");
  if (center < 0 || center >= n) throw Error(ErrorKind::InvalidInput, "palindrome center outside the window");
  PalindromeCheck res;
  res.palindromic = true;
  for (int j = 1; center - j >= 0 && center + j < n; ++j) {
    ++res.depth;
    if (window[center - j] != window[center + j]) {
      res.palindromic = false;
      return res;
    }
  }
  return res;
}

PalindromeCheck is_palindromic_periodic(const Word& w, int center) {
  if (w.empty()) throw Error(ErrorKind::InvalidInput, "empty word");
  PalindromeCheck res;
  res.palindromic = true;
  const long long n = static_cast<long long>(w.size());
  for (long long j = 1; j <= n; ++j) {
    ++res.depth;
    if (w.cyclic(center - j) != w.cyclic(center + j)) {
      res.palindromic = false;
      return res;
    }
  }
  return res;
}

void for_each_word(const std::vector<int>& alphabet, int max_length, const EnumerateOptions& opt,
                   const std::function<void(const Word&)>& f) {
  if (max_length < 2) throw Error(ErrorKind::InvalidInput, "max length must be at least 2");
  std::vector<int> sorted = alphabet;
  std::sort(sorted.begin(), sorted.end());
  auto allowed = [&](int a, int b) { return opt.allowed ? opt.allowed(a, b) : a != b; };
  Word w;
  for (int len = std::max(1, opt.min_length); len <= max_length; ++len) {
    w.symbols.assign(len, 0);
    // iterative depth-first search in lexicographic order
    std::vector<std::size_t> idx(len, 0);
    int pos = 0;
    while (pos >= 0) {
      if (idx[pos] >= sorted.size()) {
        idx[pos] = 0;
        --pos;
        if (pos >= 0) ++idx[pos];
        continue;
      }
      const int sym = sorted[idx[pos]];
      if (pos > 0 && !allowed(w.symbols[pos - 1], sym)) {
        ++idx[pos];
        continue;
      }
      w.symbols[pos] = sym;
      if (pos + 1 < len) {
        ++pos;
        continue;
      }
      bool keep = !opt.periodic || allowed(w.symbols[len - 1], w.symbols[0]);
      if (keep && opt.necklaces_only) keep = necklace(w).symbols == w.symbols;
      if (keep && opt.primitive_only) keep = is_primitive(w);
      if (keep) f(w);
      ++idx[pos];
    }
  }
}

std::vector<Word> enumerate_words(const std::vector<int>& alphabet, int max_length, const EnumerateOptions& opt) {
  std::vector<Word> out;
  for_each_word(alphabet, max_length, opt, [&](const Word& w) { out.push_back(w); });
  return out;
}

// ---------------------------------------------------------------------------
// InfiniteCode

int InfiniteCode::symbol(long long k) const {
  const long long j = k + origin;
  if (j < 0) return past.cyclic(j);
  if (j < static_cast<long long>(center.size())) return center[static_cast<std::size_t>(j)];
  return future.cyclic(j - static_cast<long long>(center.size()));
}

InfiniteCode InfiniteCode::shifted(int m) const {
  InfiniteCode c = *this;
  c.origin += m;
  return c;
}

long long InfiniteCode::future_start() const { return static_cast<long long>(center.size()) - origin; }
long long InfiniteCode::past_end() const { return -static_cast<long long>(origin); }

InfiniteCode InfiniteCode::reversed() const {
  const long long A = std::max<long long>({future_start(), -past_end(), 0}) + 1;
  InfiniteCode r;
  for (long long k = -A; k <= A; ++k) r.center.symbols.push_back(symbol(-k));
  r.origin = static_cast<int>(A);
  const long long nf = static_cast<long long>(future.size()), np = static_cast<long long>(past.size());
  const long long C = static_cast<long long>(center.size());
  for (long long i = 0; i < nf; ++i) r.past.symbols.push_back(future.cyclic(A - i + origin - C));
  for (long long i = 0; i < np; ++i) r.future.symbols.push_back(past.cyclic(origin - A - 1 - i));
  return r;
}

Word InfiniteCode::window(long long lo, long long hi) const {
  Word w;
  for (long long k = lo; k <= hi; ++k) w.symbols.push_back(symbol(k));
  return w;
}

bool InfiniteCode::admissible() const {
  if (past.empty() || future.empty()) return false;
  if (!is_admissible(past, true) || !is_admissible(future, true)) return false;
  const long long lo = past_end() - 1, hi = future_start() + 1;
  for (long long k = lo; k < hi; ++k)
    if (symbol(k) == symbol(k + 1)) return false;
  return true;
}

InfiniteCode InfiniteCode::periodic(const Word& w, int phase) {
  if (w.empty()) throw Error(ErrorKind::InvalidInput, "empty periodic word");
  InfiniteCode c;
  c.past = c.future = rotated(w, phase);
  return c;
}

InfiniteCode InfiniteCode::splice(const InfiniteCode& a, const InfiniteCode& b) {
  // materialize a's non-periodic future and b's non-periodic past
  const long long Ka = std::max<long long>(0, a.future_start());
  const long long Kb = std::max<long long>(0, -b.past_end());
  InfiniteCode c;
  for (long long k = -Kb; k < 0; ++k) c.center.symbols.push_back(b.symbol(k));
  for (long long k = 0; k < Ka; ++k) c.center.symbols.push_back(a.symbol(k));
  c.origin = static_cast<int>(Kb);
  const long long np = static_cast<long long>(b.past.size()), nf = static_cast<long long>(a.future.size());
  for (long long i = 0; i < np; ++i) c.past.symbols.push_back(b.past.cyclic(i + b.origin - Kb));
  const long long Ca = static_cast<long long>(a.center.size());
  for (long long i = 0; i < nf; ++i) c.future.symbols.push_back(a.future.cyclic(i + Ka + a.origin - Ca));
  return c;
}

std::string to_string(const InfiniteCode& c, int radius) {
  std::string out = "...";
  const Word left = c.window(-radius, -1), right = c.window(0, radius);
  out += to_string(left) + "." + to_string(right) + "...";
  return out;
}

// ---------------------------------------------------------------------------
// Bridge words

namespace {

// Pads `core` with copies of `block` on the given side until its length is
// n periods of the block.
Word pad(const Word& core, const Word& block, int n, bool append) {
  const long long target = static_cast<long long>(n) * static_cast<long long>(block.size());
  if (static_cast<long long>(core.size()) > target)
    throw Error(ErrorKind::InvalidInput, "n too small for the bridge blocks");
  Word out = core;
  while (static_cast<long long>(out.size()) < target) out = append ? concat(out, block) : concat(block, out);
  return out;
}

}  // namespace

BridgeWord bridge_word(const Word& x0, const Word& x2, const Bridge& b1, const Bridge& b3, int n) {
  if (n < 0) throw Error(ErrorKind::InvalidInput, "n must be non-negative");
  if (x0.empty() || x2.empty()) throw Error(ErrorKind::InvalidInput, "empty flank block");
  const Word plus1 = pad(b1.plus, x0, n, true);
  const Word minus3 = pad(b3.minus, x0, n, false);
  const Word plus3 = pad(b3.plus, x2, n, true);
  const Word minus1 = pad(b1.minus, x2, n, false);
  Word w = b1.center;
  for (const Word& part : {plus1, power(x0, 2 * n), minus3, b3.center, plus3, power(x2, 2 * n), minus1})
    w = concat(w, part);
  if (!is_admissible(w, true)) throw Error(ErrorKind::Inadmissible, "inadmissible splice in bridge word");
  BridgeWord out;
  out.word = w;
  if (x0.size() == x2.size()) {
    out.period = static_cast<int>(x0.size());
    if (w.size() % x0.size() == 0) out.blocks = static_cast<int>(w.size() / x0.size());
  }
  return out;
}

}  // namespace billiards
