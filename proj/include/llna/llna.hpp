#pragma once

#include "automaton.hpp"
#include "bits.hpp"
#include "classify.hpp"
#include "corpus.hpp"
#include "error.hpp"
#include "features.hpp"
#include "fetch.hpp"
#include "graph.hpp"
#include "measure.hpp"
#include "pca.hpp"
#include "pipeline.hpp"
#include "power_law.hpp"
#include "random.hpp"
#include "rule.hpp"
#include "rulesearch.hpp"
#include "svg.hpp"
