#pragma once

#include <functional>
#include <string>
#include <vector>

namespace billiards {

/// Finite symbol sequence over obstacle ids.
struct Word {
  std::vector<int> symbols;
  int marked = -1;  // optional distinguished position

  Word() = default;
  Word(std::initializer_list<int> s) : symbols(s) {}
  explicit Word(std::vector<int> s) : symbols(std::move(s)) {}

  std::size_t size() const { return symbols.size(); }
  bool empty() const { return symbols.empty(); }
  int operator[](std::size_t i) const { return symbols[i]; }
  /// Cyclic access for periodic interpretation.
  int cyclic(long long i) const;

  friend bool operator==(const Word& a, const Word& b) { return a.symbols == b.symbols; }
  friend bool operator<(const Word& a, const Word& b);
};

/// Digits when every id is below 10, dash-separated otherwise.
std::string to_string(const Word& w);
/// Accepts either form ("1213" or "1-12-3").
Word parse_word(const std::string& text);

Word concat(const Word& a, const Word& b);
Word power(const Word& w, int k);
Word rotated(const Word& w, int k);  // w[k], w[k+1], ...
Word reversed(const Word& w);
/// Lexicographically least rotation; `shift` receives its offset.
Word necklace(const Word& w, int* shift = nullptr);
/// True when w is not a proper power of a shorter word.
bool is_primitive(const Word& w);

/// Consecutive symbols differ; cyclically as well when periodic.
bool is_admissible(const Word& w, bool periodic);

struct PalindromeCheck {
  bool palindromic = false;
  int depth = 0;  // number of symmetric pairs compared
};
/// sigma_{c+j} == sigma_{c-j} for every j that stays inside the window.
PalindromeCheck is_palindromic_at(const Word& window, int center);
/// Same test for the bi-infinite periodic extension of w (depth |w|).
PalindromeCheck is_palindromic_periodic(const Word& w, int center);

/// Transition rule: allowed(a, b) for consecutive symbols. The default
/// (empty function) is a != b.
using Transition = std::function<bool(int, int)>;

struct EnumerateOptions {
  int min_length = 2;
  bool periodic = true;
  bool necklaces_only = false;  // one representative (least rotation) each
  bool primitive_only = false;  // drop proper powers
  Transition allowed;
};
/// Calls f on each admissible word of length min_length..max_length in
/// (length, lexicographic) order.
void for_each_word(const std::vector<int>& alphabet, int max_length, const EnumerateOptions& opt,
                   const std::function<void(const Word&)>& f);
std::vector<Word> enumerate_words(const std::vector<int>& alphabet, int max_length,
                                  const EnumerateOptions& opt = {});

/// Bi-infinite code assembled from a left-periodic past, a finite center
/// and a right-periodic future. raw(j) is past[j mod |past|] for j < 0,
/// center[j] for 0 <= j < |center|, future[(j - |center|) mod |future|]
/// beyond; symbol(k) = raw(k + origin), i.e. origin is the raw index of the
/// symbol at time 0.
struct InfiniteCode {
  Word past;
  Word center;
  Word future;
  int origin = 0;

  int symbol(long long k) const;
  /// Code of F^m of the point: symbol'(k) = symbol(k + m).
  InfiniteCode shifted(int m) const;
  /// Code of the involution image: symbol'(k) = symbol(-k).
  InfiniteCode reversed() const;
  /// Symbols at times lo..hi inclusive.
  Word window(long long lo, long long hi) const;
  /// Times beyond which the code is periodic on either side.
  long long future_start() const;  // symbol(k) periodic for k >= future_start
  long long past_end() const;      // symbol(k) periodic for k < past_end
  bool admissible() const;

  /// Periodic point: code of the orbit of w starting at w[phase].
  static InfiniteCode periodic(const Word& w, int phase = 0);
  /// Future of a, past of b (both at time 0).
  static InfiniteCode splice(const InfiniteCode& future_of, const InfiniteCode& past_of);
};

std::string to_string(const InfiniteCode& c, int radius = 8);

/// A heteroclinic connection block: the code reads ... minus center plus ...
/// between the two periodic flanks.
struct Bridge {
  Word minus;
  Word center;
  Word plus;
};

struct BridgeWord {
  Word word;
  int blocks = 0;  // length in units of the flank period when it divides
  int period = 0;  // the flank period p (0 when the flanks differ in length)
};

/// Periodic word center1 s_n where
///   s_n = plus1' x0^(2n) minus3' center3 plus3' x2^(2n) minus1'
/// and the primed blocks are padded with flank blocks (x0 after plus1 and
/// before minus3, x2 after plus3 and before minus1) to n flank periods.
/// With single-block centers and flanks of equal period this has 2 + 8n
/// blocks.
BridgeWord bridge_word(const Word& x0_block, const Word& x2_block, const Bridge& b1, const Bridge& b3, int n);

}  // namespace billiards
