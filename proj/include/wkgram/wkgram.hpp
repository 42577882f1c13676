#pragma once

#include "core.hpp"
#include "grammar_io.hpp"
#include "cnf.hpp"
#include "cyk.hpp"
#include "search.hpp"
#include "corpus.hpp"
#include "bench.hpp"
