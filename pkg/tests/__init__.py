# Пакет тестов
