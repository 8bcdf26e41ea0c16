#pragma once

namespace suprec {

enum class LambertBranch { principal, minus_one };

/// Real Lambert W: the w solving w * exp(w) == x on the requested branch.
/// principal needs x >= -1/e and returns w >= -1; minus_one needs
/// -1/e <= x < 0 and returns w <= -1. Throws DomainError otherwise.
double lambert_w(LambertBranch branch, double x);

}  // namespace suprec
