#pragma once

#include "ctrlsimp/control.hpp"
#include "ctrlsimp/corpus.hpp"
#include "ctrlsimp/error.hpp"
#include "ctrlsimp/lexicon.hpp"
#include "ctrlsimp/manifest.hpp"
#include "ctrlsimp/metrics.hpp"
#include "ctrlsimp/oracle.hpp"
#include "ctrlsimp/pipeline.hpp"
#include "ctrlsimp/syntax.hpp"
#include "ctrlsimp/system.hpp"
#include "ctrlsimp/text.hpp"
#include "ctrlsimp/version.hpp"
