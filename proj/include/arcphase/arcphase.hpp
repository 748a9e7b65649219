#pragma once

// Core simulation library. io.hpp (JSON manifests, refine input) is kept out of
// this umbrella since it pulls in nlohmann_json and OpenSSL.

#include "circle.hpp"
#include "estimate.hpp"
#include "fisher.hpp"
#include "harness.hpp"
#include "measure.hpp"
#include "random.hpp"
#include "refine.hpp"
#include "report.hpp"
