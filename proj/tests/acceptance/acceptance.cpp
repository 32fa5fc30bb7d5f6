// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one pass/fail line per criterion. Placeholder while the
// suite is assembled.

#include <cstdio>

int main() {
  std::printf("acceptance suite not yet implemented\n");
  return 1;
}
