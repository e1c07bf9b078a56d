#pragma once

#include "wittforge/errors.hpp"
#include "wittforge/arith.hpp"
#include "wittforge/poly.hpp"
#include "wittforge/factor.hpp"
#include "wittforge/fields.hpp"
#include "wittforge/local.hpp"
#include "wittforge/symbols.hpp"
#include "wittforge/witt.hpp"
#include "wittforge/norms.hpp"
#include "wittforge/divisorial.hpp"
#include "wittforge/table.hpp"
#include "wittforge/hermitian.hpp"
#include "wittforge/reduction.hpp"
#include "wittforge/g2.hpp"
#include "wittforge/sieve.hpp"
#include "wittforge/io.hpp"
