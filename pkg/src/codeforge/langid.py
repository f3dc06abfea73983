"""Dependency-free English detection for docstrings.

Character-trigram rank profiles (textcat style) over a small built-in set of
language samples, combined with a common-English-word check that keeps
terse, code-flavored English docstrings from being misclassified.
"""

from __future__ import annotations

import re
from collections import Counter
from typing import Dict

_SAMPLES = {
    "en": (
        "Returns the value of the given parameter and updates the internal "
        "state of the object. This function reads the input file, checks "
        "that all required fields are present, and writes the result to the "
        "output directory. If the file does not exist an error is raised. "
        "The default value is used when no argument is provided. Creates a "
        "new instance of the class with the specified configuration and "
        "registers it with the global registry so that other components can "
        "find it later. The caller is responsible for closing the stream. "
        "It was the best of times, it was the worst of times, it was the "
        "age of wisdom. We hold these truths to be self evident that all "
        "men are created equal and that they are endowed with certain "
        "rights. The quick brown fox jumps over the lazy dog while the sun "
        "sets behind the mountains in the distance."
    ),
    "pt": (
        "Retorna o valor do parametro fornecido e atualiza o estado interno "
        "do objeto. Esta funcao le o arquivo de entrada, verifica que todos "
        "os campos obrigatorios estao presentes e grava o resultado no "
        "diretorio de saida. Se o arquivo nao existir um erro sera gerado. "
        "O valor padrao e usado quando nenhum argumento e fornecido. Cria "
        "uma nova instancia da classe com a configuracao especificada e a "
        "registra no registro global para que outros componentes possam "
        "encontra-la mais tarde. Uma estrutura com os argumentos passados "
        "para o programa e devolvida ao chamador que deve fechar o fluxo."
    ),
    "es": (
        "Devuelve el valor del parametro dado y actualiza el estado interno "
        "del objeto. Esta funcion lee el archivo de entrada, comprueba que "
        "todos los campos requeridos esten presentes y escribe el resultado "
        "en el directorio de salida. Si el archivo no existe se produce un "
        "error. El valor por defecto se utiliza cuando no se proporciona "
        "ningun argumento. Crea una nueva instancia de la clase con la "
        "configuracion especificada y la registra en el registro global "
        "para que otros componentes puedan encontrarla mas tarde."
    ),
    "fr": (
        "Renvoie la valeur du parametre donne et met a jour l'etat interne "
        "de l'objet. Cette fonction lit le fichier d'entree, verifie que "
        "tous les champs requis sont presents et ecrit le resultat dans le "
        "repertoire de sortie. Si le fichier n'existe pas une erreur est "
        "levee. La valeur par defaut est utilisee lorsqu'aucun argument "
        "n'est fourni. Cree une nouvelle instance de la classe avec la "
        "configuration specifiee et l'enregistre dans le registre global "
        "pour que d'autres composants puissent la retrouver plus tard."
    ),
    "de": (
        "Gibt den Wert des angegebenen Parameters zurueck und aktualisiert "
        "den internen Zustand des Objekts. Diese Funktion liest die "
        "Eingabedatei, prueft dass alle erforderlichen Felder vorhanden "
        "sind und schreibt das Ergebnis in das Ausgabeverzeichnis. Wenn die "
        "Datei nicht existiert wird ein Fehler ausgeloest. Der Standardwert "
        "wird verwendet wenn kein Argument angegeben ist. Erstellt eine "
        "neue Instanz der Klasse mit der angegebenen Konfiguration und "
        "registriert sie in der globalen Registrierung damit andere "
        "Komponenten sie spaeter finden koennen."
    ),
    "it": (
        "Restituisce il valore del parametro specificato e aggiorna lo "
        "stato interno dell'oggetto. Questa funzione legge il file di "
        "ingresso, verifica che tutti i campi richiesti siano presenti e "
        "scrive il risultato nella directory di uscita. Se il file non "
        "esiste viene generato un errore. Il valore predefinito viene "
        "utilizzato quando non viene fornito alcun argomento. Crea una "
        "nuova istanza della classe con la configurazione specificata e la "
        "registra nel registro globale."
    ),
}

_PROFILE_SIZE = 400

# Small lexicon of everyday + programming-documentation English.  A word-hit
# fraction rescues short or jargon-heavy docstrings that trigram profiles
# handle poorly.
_ENGLISH_WORDS = frozenset(
    """
    a an the this that these those it its is are was were be been being am
    i you he she we they them his her their our your my of to in for on
    with as by at from into over under between without within during after
    before above below and or not no nor but if then else when while so
    because than such both each few more most other some any all only own
    same very can will just should now here there where why how what which
    who whom about against again further once out up down off
    return returns returned returning get gets set sets value values given
    new create creates created creating delete deletes deleted remove
    removes removed add adds added update updates updated check checks
    checked read reads write writes object objects instance class method
    function file files path name names string number list array map dict
    key keys data input output result results error errors exception raise
    raises raised throw throws thrown true false null none default
    parameter parameters argument arguments type types field fields call
    calls called callback handler index count size length byte bytes user
    users item items element elements node nodes tree parent child current
    first last next previous empty non specified specify use uses used
    using make makes made build builds built find finds found convert
    converts converted parse parses parsed load loads loaded save saves
    saved send sends sent receive receives received start starts started
    stop stops stopped run runs running test tests message text line lines
    time date number begin end generated doc docs documentation
    must may might contains contain containing match matches matched
    directory folder config configuration option options flag flags mode
    state status context request response server client helper utility
    wrapper instance copy clone compute computes computed sum total
    initialize initializes initialized handle handles handled process
    processes processed valid invalid
    pull pulls push pushes package packages dir dirs cache queue stack
    store stores stored fetch fetches fetched render renders rendered
    merge merges merged split splits entry entries record records token
    tokens buffer stream streams socket thread lock event events signal
    """.split()
)

_WORD_RE = re.compile(r"[A-Za-z]+")


def _trigrams(text: str) -> Counter:
    text = re.sub(r"[^a-z ]+", " ", text.lower())
    text = re.sub(r"\s+", " ", text).strip()
    grams: Counter = Counter()
    padded = f" {text} "
    for i in range(len(padded) - 2):
        grams[padded[i : i + 3]] += 1
    return grams


def _rank_profile(text: str) -> Dict[str, int]:
    grams = _trigrams(text)
    ranked = sorted(grams.items(), key=lambda kv: (-kv[1], kv[0]))[:_PROFILE_SIZE]
    return {g: r for r, (g, _) in enumerate(ranked)}


_PROFILES = {lang: _rank_profile(sample) for lang, sample in _SAMPLES.items()}


def _out_of_place(text_profile: Dict[str, int], lang_profile: Dict[str, int]) -> float:
    if not text_profile:
        return float(_PROFILE_SIZE)
    total = 0
    for gram, rank in text_profile.items():
        total += abs(lang_profile.get(gram, _PROFILE_SIZE) - rank)
    return total / len(text_profile)


def english_probability(text: str) -> float:
    """Probability-like score in [0, 1] that the text is English."""
    letters = [c for c in text if c.isalpha()]
    non_latin = sum(1 for c in letters if ord(c) > 0x024F)
    if letters and non_latin / len(letters) > 0.3:
        return 0.0

    words = _WORD_RE.findall(text.lower())
    if not words:
        return 0.5  # no alphabetic evidence either way

    hit = sum(1 for w in words if w in _ENGLISH_WORDS)
    word_score = min(1.0, 1.5 * hit / len(words)) if len(words) >= 2 else 0.0

    profile = _rank_profile(" ".join(words))
    d_en = _out_of_place(profile, _PROFILES["en"])
    d_other = min(
        _out_of_place(profile, p) for lang, p in _PROFILES.items() if lang != "en"
    )
    trigram_score = d_other / (d_en + d_other) if (d_en + d_other) > 0 else 0.5

    return max(word_score, trigram_score)


def is_english(text: str, threshold: float = 0.5) -> bool:
    return english_probability(text) >= threshold
