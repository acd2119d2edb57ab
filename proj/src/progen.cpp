#include "declc/progen.hpp"

#include <random>
#include <sstream>
#include <vector>

namespace declc::progen {

namespace {

class Gen {
 public:
  Gen(std::uint64_t seed, const Limits& limits) : rng_(seed), lim_(limits) {}

  std::string run() {
    layout();
    std::ostringstream os;
    os << "int hits;\n";
    if (with_class_) emit_class(os);
    emit_globals(os);
    emit_constructs(os);
    emit_main(os);
    return os.str();
  }

 private:
  int pick(int n) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }
  int range(int lo, int hi) { return lo + pick(hi - lo + 1); }
  bool chance(int percent) { return pick(100) < percent; }
  template <class T>
  const T& one(const std::vector<T>& v) { return v[static_cast<std::size_t>(pick(static_cast<int>(v.size())))]; }
  std::string num(int hi) { return std::to_string(pick(hi + 1)); }

  void layout() {
    na_ = range(2, 4);
    arr_ = range(2, lim_.max_array);
    out_ = range(2, std::min(4, lim_.max_array));
    with_class_ = chance(60);
    members_ = std::min(2, lim_.max_members);
    class_constraint_ = with_class_ && members_ == 2 && chance(50);
    class_monitor_ = with_class_ && chance(30);
    nconstructs_ = range(1, lim_.max_constructs - class_constraint_ - class_monitor_);
  }

  std::string a() { return "a" + std::to_string(pick(na_)); }
  std::string idx() { return "i" + std::to_string(pick(2)); }
  std::string arr_elem() { return "arr[" + idx() + " % " + std::to_string(arr_) + "]"; }
  std::string out_elem() { return "oa[" + idx() + " % " + std::to_string(out_) + "]"; }

  std::string input_read() {
    std::vector<std::string> v = {a(), arr_elem(), "*p0", "*p1", "**q", arr_elem() + " + " + a(),
                                  "f(" + a() + ")"};
    if (with_class_) {
      v.push_back("c0.get()");
      v.push_back("pc->get()");
    }
    return one(v);
  }

  std::string tier_a_read() { return one(std::vector<std::string>{"o0", "o1", out_elem(), "*po"}); }

  std::string monitored() {
    std::vector<std::string> v = {a(), arr_elem(), "*p0", "**q", "*pn", "o0", out_elem()};
    if (with_class_) v.push_back("c" + std::to_string(pick(2)));
    return one(v);
  }

  std::string rhs(bool tier_b) {
    std::string s = input_read();
    if (tier_b) s = tier_a_read() + (chance(50) ? " + " + s : "");
    else if (chance(40)) s += " + " + input_read();
    if (chance(20)) s += " * 2";
    return s;
  }

  std::string cond() {
    std::vector<std::string> ops = {">", "<", "==", "!=", ">="};
    return input_read() + " " + one(ops) + " " + (chance(50) ? num(9) : input_read());
  }

  void emit_class(std::ostringstream& os) {
    os << "class C {\n private:\n  int m0 = " << num(5) << ";\n";
    if (members_ == 2) os << "  int m1 = 0;\n";
    os << " public:\n  void set(int v) { m0 = v; }\n";
    os << "  int get() { return " << (members_ == 2 ? "m1" : "m0") << "; }\n";
    if (class_constraint_) os << "  m1 := m0 + " << num(3) << ";\n";
    if (class_monitor_) os << "  m0 ::= { hits = hits + 1; }\n";
    os << "};\n\n";
  }

  void emit_globals(std::ostringstream& os) {
    for (int i = 0; i < na_; ++i) os << "int a" << i << " = " << num(9) << ";\n";
    os << "int arr[" << arr_ << "];\n";
    os << "int i0 = " << num(arr_ - 1) << ";\nint i1 = " << num(arr_ - 1) << ";\n";
    os << "int *p0 = &" << a() << ";\n";
    os << "int *p1 = &arr[" << num(arr_ - 1) << "];\n";
    os << "int **q = &p" << pick(2) << ";\n";
    os << "int *pn = null;\n";
    os << "int o0;\nint o1;\nint oa[" << out_ << "];\n";
    os << "int *po = &oa[" << num(out_ - 1) << "];\n";
    os << "int r0;\nint r1;\n";
    if (with_class_) os << "C c0;\nC c1;\nC *pc = &c" << pick(2) << ";\n";
    os << "int f(int v) { return v * 2 + 1; }\n\n";
  }

  void emit_constructs(std::ostringstream& os) {
    int counters = 0;
    for (int k = 0; k < nconstructs_; ++k) {
      int roll = pick(100);
      if (roll < 50) {
        os << one(std::vector<std::string>{"o0", "o1", out_elem(), "*po"}) << " := " << rhs(false);
        if (chance(25)) os << " given " << cond();
        os << ";\n";
      } else if (roll < 65) {
        os << (chance(50) ? "r0" : "r1") << " := " << rhs(true);
        if (chance(20)) os << " given " << cond();
        os << ";\n";
      } else if (roll < 85) {
        os << "int mc" << counters << ";\n";
        os << monitored() << " ::= { mc" << counters << " = mc" << counters << " + 1; }\n";
        ++counters;
      } else {
        os << "int mc" << counters << ";\n";
        os << cond() << " ?? { mc" << counters << " = mc" << counters << " + 1; }\n";
        ++counters;
      }
    }
    os << "\n";
  }

  std::string write() {
    switch (pick(with_class_ ? 12 : 9)) {
      case 0:
      case 1: return a() + " = " + num(9) + ";";
      case 2: return "arr[" + num(arr_ - 1) + "] = " + num(9) + ";";
      case 3: return idx() + " = " + num(arr_ - 1) + ";";
      case 4:
        return "p" + std::to_string(pick(2)) + " = " +
               (chance(50) ? "&" + a() : "&arr[" + num(arr_ - 1) + "]") + ";";
      case 5: return "q = &p" + std::to_string(pick(2)) + ";";
      case 6: return std::string("po = ") + (chance(70) ? "&oa[" + num(out_ - 1) + "]" : "&o1") + ";";
      case 7: return std::string("pn = ") + (chance(70) ? "&" + a() : "null") + ";";
      case 8: return (chance(50) ? "oa[" + num(out_ - 1) + "]" : std::string("o1")) + " = " + num(9) + ";";
      case 9: return "c" + std::to_string(pick(2)) + ".set(" + num(9) + ");";
      case 10: return "pc = &c" + std::to_string(pick(2)) + ";";
      default: return "pc->set(" + num(9) + ");";
    }
  }

  void emit_main(std::ostringstream& os) {
    os << "int main() {\n";
    int n = range(1, lim_.max_writes);
    for (int i = 0; i < n; ++i) os << "  " << write() << "\n";
    os << "  return 0;\n}\n";
  }

  std::mt19937_64 rng_;
  Limits lim_;
  int na_ = 2, arr_ = 2, out_ = 2, members_ = 2, nconstructs_ = 1;
  bool with_class_ = false, class_constraint_ = false, class_monitor_ = false;
};

}  // namespace

std::string generate(std::uint64_t seed, const Limits& limits) { return Gen(seed, limits).run(); }

}  // namespace declc::progen
