// Runs the ten acceptance checks on genus 2 at the default sweep radius and
// prints one PASS/FAIL line per criterion. Exit status is the number of
// failures (capped at 1).

#include <chrono>
#include <cstdio>
#include <iostream>

#include "regcocycle/verify.hpp"

using namespace regcocycle;

int main(int argc, char** argv) {
  VerifyConfig config;
  if (argc > 1) config.radius = std::atoi(argv[1]);
  Verifier v(config);

  struct Criterion {
    const char* name;
    CheckResult (Verifier::*check)();
  };
  const Criterion criteria[] = {
      {"cocycle identity on the ball", &Verifier::cocycle_identity},
      {"closed form vs constructed cocycle", &Verifier::closed_form},
      {"loop identity theta_n + N = n + 3", &Verifier::loop_identity},
      {"central extension arithmetic", &Verifier::extension_arithmetic},
      {"weak boundedness and regular level sets", &Verifier::weak_boundedness},
      {"hyperbolic model vs combinatorial turns", &Verifier::geometry_oracle},
      {"fellow travellers", &Verifier::fellow_travellers},
      {"automata and projection oracle", &Verifier::automata},
      {"transfer to a finite-index subgroup", &Verifier::transfer},
      {"ball counts and half-relator merges", &Verifier::ball_counts},
  };

  int failures = 0, index = 0;
  for (const auto& c : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    CheckResult r;
    try {
      r = (v.*c.check)();
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = {{"error", e.what()}};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!r.passed) ++failures;
    std::printf("%s [%2d] %s (%.1fs)\n", r.passed ? "PASS" : "FAIL", index, c.name, secs);
    if (!r.passed) std::cout << "      " << r.detail.dump() << "\n";
    std::fflush(stdout);
  }
  std::printf("%d/10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
