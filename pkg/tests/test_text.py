from muser.text import normalize, split_sentences, tokenize


def test_tokenize_lowercases_and_splits_punctuation():
    assert tokenize("The Fox, quick!") == ["the", "fox", "quick"]


def test_tokenize_cjk_per_character():
    assert tokenize("北京欢迎你") == ["北", "京", "欢", "迎", "你"]


def test_tokenize_mixed_scripts():
    assert tokenize("GDP增长3percent") == ["gdp", "增", "长", "3percent"]


def test_split_sentences_ascii_terminators():
    assert split_sentences("One. Two! Three?") == ["One.", "Two!", "Three?"]


def test_split_sentences_cjk_terminators():
    assert split_sentences("你好。再见！") == ["你好。", "再见！"]


def test_split_sentences_newline():
    assert split_sentences("first line\nsecond line") == ["first line", "second line"]


def test_split_sentences_empty():
    assert split_sentences("   ") == []


def test_normalize_collapses_whitespace_and_nfc():
    # U+0041 U+030A composes to U+00C5 under NFC
    assert normalize("Å  b\tc\nd") == "Å b c d"
