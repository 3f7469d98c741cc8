#include <cstdio>

#include <longcast/verify.hpp>

int main()
{
  const auto results = longcast::verify::run_acceptance();
  int failures = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto & r = results[i];
    std::printf("[%s] criterion %zu: %s (%.2fs) -- %s\n", r.passed ? "PASS" : "FAIL", i + 1,
      r.name.c_str(), r.seconds, r.detail.c_str());
    failures += r.passed ? 0 : 1;
  }
  std::printf("%zu/%zu criteria passed\n", results.size() - failures, results.size());
  return failures == 0 ? 0 : 1;
}
