#pragma once

#include "bigint.hpp"
#include "characters.hpp"
#include "coefficients.hpp"
#include "concurrency.hpp"
#include "partition.hpp"
#include "reduced.hpp"
#include "report.hpp"
#include "verifiers.hpp"
