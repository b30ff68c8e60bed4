#pragma once

#include "gfm/artifact.hpp"
#include "gfm/bitspan.hpp"
#include "gfm/builtin_indexers.hpp"
#include "gfm/error.hpp"
#include "gfm/fragment.hpp"
#include "gfm/grammar.hpp"
#include "gfm/hyperknowledge.hpp"
#include "gfm/indexer.hpp"
#include "gfm/media/csv.hpp"
#include "gfm/media/ppm.hpp"
#include "gfm/media/text.hpp"
#include "gfm/media/wav.hpp"
#include "gfm/resolver.hpp"
