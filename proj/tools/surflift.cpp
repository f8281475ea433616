// surflift: command-line driver.
//
// Exit codes: 0 success, 2 mathematical failure (nonzero obstruction, failed
// check, engine/oracle mismatch), 1 malformed input.

#include <chrono>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "surflift/cohomology.hpp"
#include "surflift/flags.hpp"
#include "surflift/lifting.hpp"
#include "surflift/local_example.hpp"
#include "surflift/oracle.hpp"
#include "surflift/repfile.hpp"

using namespace surflift;

namespace {

constexpr int kOk = 0;
constexpr int kMalformed = 1;
constexpr int kMathFailure = 2;

std::string join(const std::vector<int>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "]";
}

std::string describe_group(const Subquotient& q) {
  const auto& e = q.exponents();
  if (e.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i)
    s += (i ? " + " : "") + std::string("Z/") + std::to_string(q.ring().p()) + (e[i] > 1 ? "^" + std::to_string(e[i]) : "");
  return s;
}

void print_group(std::ostream& os, const char* name, const Subquotient& q) {
  os << name << ": " << describe_group(q) << "  exponents " << join(q.exponents()) << "  log_p|" << name
     << "| = " << q.log_order();
  if (q.ring().exponent() == 1) os << "  dim " << name << " = " << q.exponents().size();
  os << "\n";
}

KummerOptions kummer_options(bool every, bool relaxed, bool index_only = false) {
  KummerOptions o;
  o.all_subextensions = !index_only;
  if (every) o.splittings = SplittingQuantifier::Every;
  o.relaxed_characters = relaxed;
  return o;
}

std::string verdict_text(const KummerVerdict& v) {
  switch (v.status) {
    case KummerVerdict::Status::Kummer: return "yes";
    case KummerVerdict::Status::NotKummer: return "no (" + v.violation + ")";
    case KummerVerdict::Status::Inconclusive: return "inconclusive (" + v.violation + ")";
  }
  return "?";
}

void print_rep_commented(std::ostream& os, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) os << "# " << line << "\n";
}

// --- subcommands ---------------------------------------------------------------------

int cmd_cohomology(const std::string& rep, const std::string& coeff) {
  const GModule base = RepFile::load(rep).module();
  const GModule m = coeff.empty() ? base : RepFile::load(coeff).module();
  if (m.genus() != base.genus()) throw InvalidInput("coefficient module has a different genus");
  const Cohomology h(m);
  std::cout << "module: rank " << m.rank() << " over " << m.ring().name() << ", genus " << m.genus()
            << (m.is_trivial() ? ", trivial action" : "") << "\n";
  print_group(std::cout, "H0", h.h0());
  print_group(std::cout, "H1", h.h1());
  print_group(std::cout, "H2", h.h2());
  return kOk;
}

int cmd_flag_check(const std::string& rep, bool every, bool relaxed, bool index_only) {
  const Flag f = RepFile::load(rep).flag();
  const auto opts = kummer_options(every, relaxed, index_only);
  const FlagIndexTable ir = index_table(f);
  const FlagIndexTable i1 = index_table(reduce(f, 1));
  std::cout << "flag: dim " << f.dim() << " over " << f.ring().name() << ", genus " << f.genus() << "\n";
  std::cout << "wound: " << (is_wound(f) ? "yes" : "no") << "\n";
  std::cout << "wound-kummer: " << (is_wound_kummer(f) ? "yes" : "no") << "\n";
  std::cout << "kummer: " << verdict_text(is_kummer(f, opts)) << "\n";
  std::cout << "k   i_r(k)  i_1(k)\n";
  for (int k = 1; k <= f.dim(); ++k) std::cout << k << "   " << ir(k) << "       " << i1(k) << "\n";
  return kOk;
}

int cmd_lift(const std::string& rep, int to_r, const std::string& mode, const std::string& out, bool every) {
  Flag f = RepFile::load(rep).flag();
  if (to_r <= f.ring().exponent()) throw InvalidInput("--to-r must exceed the current exponent " + std::to_string(f.ring().exponent()));
  std::string m = mode;
  if (m.empty()) m = is_wound_kummer(f) ? "wound" : "kummer";
  if (m != "wound" && m != "kummer") throw InvalidInput("--mode must be wound or kummer");
  const auto opts = kummer_options(every, false);
  std::ostringstream log;
  while (f.ring().exponent() < to_r) {
    LiftTrace trace;
    Flag next = m == "wound" ? lift_wound_kummer(f, std::nullopt, &trace)
                             : lift_kummer(f, KummerMode::ExtendQuotient, std::nullopt, &trace, opts);
    log << "lifted " << f.ring().name() << " -> " << next.ring().name() << " (" << m << "): gluift calls "
        << trace.gluift_calls << ", adjustments " << trace.adjustments.size();
    if (!trace.branches.empty()) {
      log << ", branches";
      for (const auto& b : trace.branches) log << " " << b;
    }
    log << "\n";
    log << "  relator holds: yes; reduces to input: " << (reduce(next, f.ring().exponent()) == f ? "yes" : "no") << "\n";
    if (m == "wound") log << "  wound-kummer: " << (is_wound_kummer(next) ? "yes" : "no") << "\n";
    else log << "  kummer: " << verdict_text(is_kummer(next, opts)) << "\n";
    f = next;
  }
  const std::string text = RepFile::from_module(f.module()).to_text();
  if (out.empty()) {
    print_rep_commented(std::cout, log.str());
    std::cout << text;
  } else {
    write_text_file(out, text);
    std::cout << log.str() << "wrote " << out << "\n";
  }
  return kOk;
}

int cmd_glue(const std::string& a, const std::string& b, const std::string& out) {
  const Flag e = RepFile::load(a).flag();
  const Flag f = RepFile::load(b).flag();
  ObstructedFlag g = glue(e, f);
  if (!g.ok()) {
    const Vec cls = Cohomology(g.coefficients).class_of(2, g.obstruction);
    std::cout << "obstruction: relator defect " << join(std::vector<int>(g.obstruction.begin(), g.obstruction.end()))
              << " in H2(Hom(L_" << f.dim() + 1 << ", L_1)), class coordinates "
              << join(std::vector<int>(cls.begin(), cls.end())) << "\n";
    return kMathFailure;
  }
  const std::string text = RepFile::from_module(g.flag->module()).to_text();
  if (out.empty()) std::cout << "# glued: obstruction class 0\n" << text;
  else write_text_file(out, text), std::cout << "glued: obstruction class 0\nwrote " << out << "\n";
  return kOk;
}

int cmd_lift_class(const std::string& rep, const std::string& cocycle, const std::string& out) {
  const Flag f = RepFile::load(rep).flag();
  const CocycleFile c = CocycleFile::load(cocycle);
  if (c.p != f.ring().p() || c.genus != f.genus() || c.dim != f.dim())
    throw InvalidInput("cocycle file does not match the representation (p, genus, dim)");
  const Ring cr(c.p, c.r);
  const Vec cp = reduce_vec(cr, c.flat(), 1);
  LiftTrace trace;
  const Vec lifted = lift_h1_class(f, cp, &trace);
  const CocycleFile res = CocycleFile::from_flat(f.ring(), f.genus(), f.dim(), lifted);
  const bool cocycle_ok = Cohomology(f.module()).is_cocycle(lifted);
  const bool reduces = reduce_vec(f.ring(), lifted, 1) == cp;
  std::ostringstream log;
  log << "lifted class to " << f.ring().name() << ": cocycle " << (cocycle_ok ? "yes" : "no") << ", reduces to input "
      << (reduces ? "yes" : "no") << ", gluift calls " << trace.gluift_calls << "\n";
  if (out.empty()) {
    print_rep_commented(std::cout, log.str());
    std::cout << res.to_text();
  } else {
    res.save(out);
    std::cout << log.str() << "wrote " << out << "\n";
  }
  return cocycle_ok && reduces ? kOk : kMathFailure;
}

int cmd_oracle_compare(const std::string& rep) {
  const GModule m = RepFile::load(rep).module();
  const auto budget = oracle::SearchBudget::from_env();
  std::vector<std::string> diff;
  std::cout << "module: rank " << m.rank() << " over " << m.ring().name() << ", genus " << m.genus() << "\n";

  const Cohomology h(m);
  try {
    const auto b = oracle::brute_h1(m, budget);
    std::cout << "H1 exponents: engine " << join(h.h1().exponents()) << ", brute force " << join(b.exponents) << "\n";
    if (b.exponents != h.h1().exponents()) diff.push_back("H1 invariant factors differ");
    if (static_cast<int>(b.invariants) != [&] {
          int n = 1;
          for (int i = 0; i < h.h0().log_order(); ++i) n *= static_cast<int>(m.ring().p());
          return n;
        }())
      diff.push_back("H0 order differs");
  } catch (const BudgetExceeded& e) {
    std::cout << "H1: skipped (" << e.what() << ")\n";
  }

  if (!m.actions().front().is_upper_triangular()) {
    std::cout << "not triangular: flag comparisons skipped\n";
  } else {
    const Flag f(m);
    try {
      const auto lifts = oracle::brute_lift(f, budget);
      const bool engine = lift_rep(f).ok();
      std::cout << "lift to " << m.ring().with_exponent(m.ring().exponent() + 1).name() << ": engine "
                << (engine ? "unobstructed" : "obstructed") << ", brute force " << lifts.size() << " lifts\n";
      if (engine != !lifts.empty()) diff.push_back("lift verdicts differ");
    } catch (const BudgetExceeded& e) {
      std::cout << "lift: skipped (" << e.what() << ")\n";
    }
    if (f.dim() >= 2) {
      const Flag e = truncate(f), q = quotient_by_first(f);
      try {
        const auto glued = oracle::brute_glue(e, q, budget);
        const bool engine = glue(e, q).ok();
        std::cout << "glue truncation and quotient: engine " << (engine ? "unobstructed" : "obstructed")
                  << ", brute force " << glued.size() << " gluings\n";
        if (engine != !glued.empty()) diff.push_back("glue verdicts differ");
      } catch (const BudgetExceeded& ex) {
        std::cout << "glue: skipped (" << ex.what() << ")\n";
      }
    }
  }
  std::cout << "diff:" << (diff.empty() ? " (empty)" : "") << "\n";
  for (const auto& d : diff) std::cout << "  " << d << "\n";
  return diff.empty() ? kOk : kMathFailure;
}

std::string set_text(const std::vector<std::int64_t>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

int cmd_local_example(const std::string& field, std::int64_t ell) {
  std::vector<local::Field> fields;
  if (field.empty() || field == "q2") fields.push_back(local::Field::q2());
  if (field.empty() || field == "ql") fields.push_back(local::Field::ql(ell));
  if (fields.empty()) throw InvalidInput("--field must be q2 or ql");
  bool ok = true;
  for (const auto& k : fields) {
    const auto classes = local::square_classes(k);
    std::cout << "field " << k.name() << "\n  square classes " << set_text(classes) << "\n  hilbert symbol table:\n";
    for (auto a : classes) {
      std::cout << "    " << std::setw(4) << a << " |";
      for (auto b : classes) {
        const int h = local::hilbert(k, a, b);
        const bool brute = local::hilbert_soluble_bruteforce(k, a, b);
        ok = ok && (brute == (h == 1));
        std::cout << (h == 1 ? " +" : " -");
      }
      std::cout << "\n";
    }
    const auto bad = local::non_liftable_classes(k);
    std::cout << "  non-liftable to Z/4: " << set_text(bad) << "\n";
    std::int64_t e1 = -2, e2 = -5;
    if (!k.is_dyadic()) e1 = -k.ell, e2 = k.ell;
    const std::int64_t c1 = local::square_class(k, e1), c2 = local::square_class(k, e2);
    std::cout << "  eps = (" << e1 << "), eps' = (" << e2 << "): liftable " << local::liftable_mod4(k, c1) << ","
              << local::liftable_mod4(k, c2) << "; hilbert(eps, eps') = " << local::hilbert(k, e1, e2) << "\n";
  }
  const auto rep = local::check_no_cyclotomic_lift();
  std::cout << "parity system: edges";
  for (auto [i, j] : rep.edges) std::cout << " (" << i << "," << j << ")";
  std::cout << "\n  satisfying assignments: " << rep.satisfying << " of " << rep.assignments
            << (rep.unsat() ? " (UNSAT)" : "") << "\n  removing one edge:";
  for (int c : rep.satisfying_without_edge) std::cout << " " << c;
  std::cout << (rep.minimal() ? " (every removal satisfiable)" : "") << "\n";
  std::cout << "formula/brute-force agreement: " << (ok ? "yes" : "no") << "\n";
  return ok && rep.unsat() && rep.minimal() ? kOk : kMathFailure;
}

int cmd_random_flag(Residue p, int r, int dim, int genus, const std::string& kind, std::uint64_t seed, const std::string& out) {
  oracle::FlagRequest req{p, r, dim, genus, oracle::parse_flag_kind(kind), seed};
  const std::string text = RepFile::from_module(oracle::gen_random_flag(req).module()).to_text();
  if (out.empty()) std::cout << text;
  else write_text_file(out, text);
  return kOk;
}

// A desk-scale run of the main properties.
int cmd_selftest() {
  int failures = 0;
  auto report = [&](const std::string& name, bool ok, double ms) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << " (" << static_cast<long>(ms) << " ms)\n";
    failures += !ok;
  };
  auto timed = [&](const std::string& name, const std::function<bool()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = body();
    } catch (const std::exception& e) {
      std::cout << "  " << name << ": " << e.what() << "\n";
    }
    report(name, ok, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  };

  timed("trivial-coefficient cohomology", [] {
    for (int g = 1; g <= 3; ++g)
      for (Residue p : {2, 3})
        for (int s = 1; s <= 3; ++s) {
          const Cohomology h(GModule::trivial(Ring(p, s), g, 1));
          if (h.h1().exponents() != std::vector<int>(2 * g, s) || h.h2().exponents() != std::vector<int>{s}) return false;
        }
    return true;
  });
  timed("cup pairing is perfect", [] {
    for (int g = 1; g <= 3; ++g)
      for (Residue p : {2, 3, 5})
        if (!demushkin_check(p, g).ok()) return false;
    return true;
  });
  timed("cohomology vs brute force", [] {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Flag f = oracle::gen_random_flag({2, 1, 2, 1, oracle::FlagKind::Any, seed});
      if (oracle::brute_h1(f.module()).exponents != Cohomology(f.module()).h1().exponents()) return false;
    }
    return true;
  });
  timed("lift verdicts vs brute force", [] {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Flag f = oracle::gen_random_flag({2, 1, 3, 1, oracle::FlagKind::Any, seed});
      if (lift_rep(f).ok() == oracle::brute_lift(f).empty()) return false;
    }
    return true;
  });
  timed("Kummer lifting", [] {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Flag f = oracle::gen_random_flag({seed % 2 ? 3 : 2, 1 + static_cast<int>(seed % 2), 2 + static_cast<int>(seed % 3),
                                              1, oracle::FlagKind::Kummer, seed});
      const Flag F = lift_kummer(f);
      if (reduce(F, f.ring().exponent()) != f || !is_kummer(F)) return false;
    }
    return true;
  });
  timed("wound Kummer lifting", [] {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Flag f = oracle::gen_random_flag({2, 1 + static_cast<int>(seed % 2), 2 + static_cast<int>(seed % 3), 1,
                                              oracle::FlagKind::WoundKummer, seed});
      const Flag F = lift_wound_kummer(f);
      if (reduce(F, f.ring().exponent()) != f || !is_wound_kummer(F)) return false;
    }
    return true;
  });
  timed("local example", [] {
    const auto rep = local::check_no_cyclotomic_lift();
    return rep.unsat() && rep.minimal() &&
           local::non_liftable_classes(local::Field::q2()) == std::vector<std::int64_t>{-1, -2, -5, -10};
  });
  std::cout << (failures ? "selftest: FAILED" : "selftest: all passed") << "\n";
  return failures ? kMathFailure : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"surflift: cohomology, flags and lifting for surface group representations over Z/p^r"};
  app.require_subcommand(1);

  std::string rep, rep2, coeff, mode, out, field, kind = "any";
  int to_r = 0, dim = 2, genus = 1, r = 1;
  std::int64_t ell = 3, p = 2;
  std::uint64_t seed = 0;
  bool every = false, relaxed = false, index_only = false;

  auto* coh = app.add_subcommand("cohomology", "H^0, H^1, H^2 with coefficients in a module");
  coh->add_option("repfile", rep, "representation file")->required();
  coh->add_option("--coeff", coeff, "coefficient module file (defaults to the representation)");

  auto* fc = app.add_subcommand("flag-check", "wound / wound-Kummer / Kummer verdicts and the index table");
  fc->add_option("repfile", rep)->required();
  fc->add_flag("--every-splitting", every, "require every quotient by a split line to be Kummer");
  fc->add_flag("--relaxed-characters", relaxed, "accept Teichmüller graded pieces");
  fc->add_flag("--index-only", index_only, "index condition as i_r(k) = i_1(k) only, without sub-extensions");

  auto* lf = app.add_subcommand("lift", "lift a (wound) Kummer flag to a higher exponent");
  lf->add_option("repfile", rep)->required();
  lf->add_option("--to-r", to_r, "target exponent")->required();
  lf->add_option("--mode", mode, "wound or kummer (default: wound when wound Kummer)");
  lf->add_option("-o,--output", out, "output file (default: stdout)");
  lf->add_flag("--every-splitting", every);

  auto* gl = app.add_subcommand("glue", "glue E (quotient V_{d/1}) and F (sub V_{d/1})");
  gl->add_option("repfileE", rep)->required();
  gl->add_option("repfileF", rep2)->required();
  gl->add_option("-o,--output", out);

  auto* lc = app.add_subcommand("lift-class", "lift a class of H^1(V mod p) to H^1(V)");
  lc->add_option("repfile", rep)->required();
  lc->add_option("cocyclefile", rep2)->required();
  lc->add_option("-o,--output", out);

  auto* oc = app.add_subcommand("oracle-compare", "engine vs brute force on one representation");
  oc->add_option("repfile", rep)->required();

  auto* le = app.add_subcommand("local-example", "square classes, Hilbert symbols and the parity obstruction");
  le->add_option("--field", field, "q2 or ql (default: both)");
  le->add_option("--ell", ell, "odd prime for ql");

  auto* rf = app.add_subcommand("random-flag", "seeded random flag");
  rf->add_option("--p", p);
  rf->add_option("--r", r);
  rf->add_option("--dim", dim);
  rf->add_option("--genus", genus);
  rf->add_option("--kind", kind, "any, kummer or wound-kummer");
  rf->add_option("--seed", seed);
  rf->add_option("-o,--output", out);

  auto* st = app.add_subcommand("selftest", "desk-scale property suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kMalformed;
  }

  try {
    if (*coh) return cmd_cohomology(rep, coeff);
    if (*fc) return cmd_flag_check(rep, every, relaxed, index_only);
    if (*lf) return cmd_lift(rep, to_r, mode, out, every);
    if (*gl) return cmd_glue(rep, rep2, out);
    if (*lc) return cmd_lift_class(rep, rep2, out);
    if (*oc) return cmd_oracle_compare(rep);
    if (*le) return cmd_local_example(field, ell);
    if (*rf) return cmd_random_flag(p, r, dim, genus, kind, seed, out);
    if (*st) return cmd_selftest();
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMalformed;
  } catch (const Error& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kMathFailure;
  }
  return kMalformed;
}
