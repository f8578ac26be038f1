#pragma once

#include <string>

namespace mexp {

enum class Verdict { evidence_expansive, evidence_not_expansive, inconclusive };

enum class Sided { one_sided, two_sided };

std::string to_string(Verdict v);
std::string to_string(Sided s);

}  // namespace mexp
