#pragma once

// Umbrella header for the ua library.

#include "ua/algebra.hpp"
#include "ua/builtins.hpp"
#include "ua/congruence.hpp"
#include "ua/error.hpp"
#include "ua/json_io.hpp"
#include "ua/maltsev.hpp"
#include "ua/relation.hpp"
#include "ua/term.hpp"
#include "ua/variety.hpp"
